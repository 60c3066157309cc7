#ifndef HERMITEGF_MULTIINDEX_HPP
#define HERMITEGF_MULTIINDEX_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hermitegf/errors.hpp"
#include "hermitegf/linalg.hpp"

namespace hermitegf {

/// A multi-index is a d-tuple of nonnegative degrees; we pass them around as
/// spans into the flat storage of a GradedIndexList.
using MultiIndex = std::span<const int>;

/// All multi-indices of dimension d with total degree <= j_max, in graded
/// order: ascending in |l|, and within one degree descending lexicographically
/// in l_1, then l_2, ... . Growing j_max only appends entries (prefix
/// stability), which the degree-search in the cutoff module depends on.
class GradedIndexList {
public:
    GradedIndexList() = default;
    GradedIndexList(int dim, int j_max, std::vector<int> flat);

    int dim() const { return dim_; }
    int j_max() const { return j_max_; }
    std::size_t size() const { return dim_ ? flat_.size() / dim_ : 0; }
    MultiIndex operator[](std::size_t i) const {
        return {flat_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    int total_degree(std::size_t i) const { return totals_[i]; }
    /// Position of the first index with total degree s.
    std::size_t degree_offset(int s) const { return offsets_[static_cast<std::size_t>(s)]; }

private:
    int dim_ = 0;
    int j_max_ = -1;
    std::vector<int> flat_;
    std::vector<int> totals_;
    std::vector<std::size_t> offsets_; // offsets_[s] = #indices with |l| < s
};

/// Number of multi-indices of dimension d with |l| <= j_max, i.e.
/// binomial(j_max + d, d).
std::uint64_t graded_count(int d, int j_max);

/// Enumerate the graded index list. Throws CapacityExceeded when the count
/// would pass 10^7.
GradedIndexList enumerate_graded(int d, int j_max);

/// Sum of ln(l_i!) over the components, via lgamma.
double log_factorial_multi(MultiIndex l);

/// Component-wise power prod_i v_i^{l_i}, with 0^0 = 1.
double pow_multi(std::span<const double> v, MultiIndex l);

} // namespace hermitegf

#endif
