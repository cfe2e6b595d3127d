#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace mqsvt {

/// Permutation on {0..k-1}, k <= 8, stored by images.
class Permutation {
  public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
        std::vector<bool> seen(images_.size(), false);
        for (int v : images_) {
            if (v < 0 || v >= static_cast<int>(images_.size()) || seen[v]) {
                throw std::invalid_argument("not a permutation");
            }
            seen[v] = true;
        }
        if (images_.size() > 8) throw std::invalid_argument("k > 8");
    }

    static Permutation identity(int k) {
        std::vector<int> im(k);
        for (int i = 0; i < k; ++i) im[i] = i;
        return Permutation(std::move(im));
    }

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[i]; }

    Permutation inverse() const {
        std::vector<int> im(images_.size());
        for (int i = 0; i < size(); ++i) im[images_[i]] = i;
        return Permutation(std::move(im));
    }

    /// (a.compose(b))(i) = a(b(i)).
    Permutation compose(const Permutation& b) const {
        std::vector<int> im(images_.size());
        for (int i = 0; i < size(); ++i) im[i] = images_[b(i)];
        return Permutation(std::move(im));
    }

    bool operator==(const Permutation&) const = default;

  private:
    std::vector<int> images_;
};

/// Multiset of cycle lengths, sorted descending.
using CyclePartition = std::vector<int>;

inline CyclePartition cyclic_partition(const Permutation& p) {
    std::vector<bool> seen(p.size(), false);
    CyclePartition part;
    for (int i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        int len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = p(j);
            ++len;
        }
        part.push_back(len);
    }
    std::sort(part.rbegin(), part.rend());
    return part;
}

inline int cycle_count(const Permutation& p) {
    return static_cast<int>(cyclic_partition(p).size());
}

inline const std::vector<Permutation>& all_s4() {
    static const std::vector<Permutation> perms = [] {
        std::vector<Permutation> out;
        std::array<int, 4> im = {0, 1, 2, 3};
        do {
            out.emplace_back(std::vector<int>(im.begin(), im.end()));
        } while (std::next_permutation(im.begin(), im.end()));
        return out;
    }();
    return perms;
}

}  // namespace mqsvt
