#include "hermitegf/multiindex.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace hermitegf {

GradedIndexList::GradedIndexList(int dim, int j_max, std::vector<int> flat)
    : dim_(dim), j_max_(j_max), flat_(std::move(flat)) {
    const std::size_t n = size();
    totals_.resize(n);
    offsets_.assign(static_cast<std::size_t>(j_max) + 2, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int s = 0;
        for (int c = 0; c < dim_; ++c) s += flat_[i * dim_ + c];
        totals_[i] = s;
    }
    for (int s = 0; s <= j_max_ + 1; ++s)
        offsets_[static_cast<std::size_t>(s)] = static_cast<std::size_t>(graded_count(dim_, s - 1));
}

std::uint64_t graded_count(int d, int j_max) {
    if (j_max < 0) return 0;
    // binomial(j_max + d, d); saturate far above the enumeration cap instead of
    // wrapping for absurd inputs
    constexpr std::uint64_t cap = 1'000'000'000'000ull;
    std::uint64_t c = 1;
    for (int i = 1; i <= d; ++i) {
        if (c > cap) return cap;
        c = c * static_cast<std::uint64_t>(j_max + i) / static_cast<std::uint64_t>(i);
    }
    return c;
}

namespace {

void emit_degree(int dim, int pos, int remaining, std::vector<int>& scratch,
                 std::vector<int>& out) {
    if (pos == dim - 1) {
        scratch[pos] = remaining;
        out.insert(out.end(), scratch.begin(), scratch.end());
        return;
    }
    for (int l = remaining; l >= 0; --l) {
        scratch[pos] = l;
        emit_degree(dim, pos + 1, remaining - l, scratch, out);
    }
}

} // namespace

GradedIndexList enumerate_graded(int d, int j_max) {
    if (d < 1) throw DomainError("enumerate_graded: dimension must be >= 1");
    if (j_max < 0) throw DomainError("enumerate_graded: j_max must be >= 0");
    const std::uint64_t count = graded_count(d, j_max);
    if (count > 10'000'000ull)
        throw CapacityExceeded("enumerate_graded: " + std::to_string(count) +
                               " indices exceeds the 1e7 cap");
    std::vector<int> flat;
    flat.reserve(static_cast<std::size_t>(count) * d);
    std::vector<int> scratch(d);
    for (int s = 0; s <= j_max; ++s) emit_degree(d, 0, s, scratch, flat);
    return GradedIndexList(d, j_max, std::move(flat));
}

double log_factorial_multi(MultiIndex l) {
    double s = 0.0;
    for (int li : l) s += std::lgamma(static_cast<double>(li) + 1.0);
    return s;
}

double pow_multi(std::span<const double> v, MultiIndex l) {
    double p = 1.0;
    for (std::size_t i = 0; i < l.size(); ++i)
        for (int e = 0; e < l[i]; ++e) p *= v[i];
    return p;
}

} // namespace hermitegf
