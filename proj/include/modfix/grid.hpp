#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "modfix/errors.hpp"
#include "modfix/rng.hpp"

namespace modfix {

/// Finite discretization of a measure space: sample points with positive
/// weights. The scalar space is the grid with one point of weight 1.
/// Points are informational; only the weights enter any computation.
class MeasureGrid {
public:
    MeasureGrid(std::vector<double> points, std::vector<double> weights);

    /// One point at 0 with weight 1.
    static MeasureGrid scalar();

    /// n points at 0..n-1, each with weight 1/n.
    static MeasureGrid uniform(std::size_t n);

    std::size_t size() const noexcept { return weights_.size(); }
    std::span<const double> points() const noexcept { return points_; }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
};

/// A function value vector aligned to a MeasureGrid. Entries are validated
/// to be finite at construction; the value is immutable afterwards, so it is
/// freely shareable across threads.
class FnVec {
public:
    FnVec() = default;
    explicit FnVec(std::vector<double> values);
    FnVec(std::initializer_list<double> values);

    /// One-element vector for the scalar space.
    static FnVec scalar(double v);

    /// n copies of v.
    static FnVec constant(std::size_t n, double v);

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    bool operator==(const FnVec&) const = default;

private:
    std::vector<double> values_;
};

/// Axis-aligned box of pointwise bounds; convex and closed by construction.
class DomainBox {
public:
    DomainBox(FnVec lower, FnVec upper);

    static DomainBox scalar(double lo, double hi);

    const FnVec& lower() const noexcept { return lower_; }
    const FnVec& upper() const noexcept { return upper_; }
    std::size_t size() const noexcept { return lower_.size(); }

    bool contains(const FnVec& f) const;

private:
    FnVec lower_;
    FnVec upper_;
};

void require_aligned(const MeasureGrid& grid, const FnVec& f);
void require_aligned(const FnVec& a, const FnVec& b);

/// f - g, pointwise.
FnVec sub(const FnVec& f, const FnVec& g);

/// c * f, pointwise.
FnVec scale(const FnVec& f, double c);

/// (1-t)*f + t*g, computed as f + t*(g-f) per point. The endpoints are
/// exact: t=0 returns f and t=1 returns g bitwise, and f==g returns f
/// bitwise for any t. The result never leaves [min(f,g), max(f,g)]
/// pointwise.
FnVec convex_combine(const FnVec& f, const FnVec& g, double t);

/// One uniform draw from the box, one coordinate at a time.
FnVec sample_point(const DomainBox& box, SampleRng& rng);

/// `count` deterministic samples from the box. The first two samples are the
/// lower and upper corners (when count allows), so boundary behaviour is
/// always exercised; the rest are uniform.
std::vector<FnVec> sample_domain(const DomainBox& box, std::size_t count, std::uint64_t seed);

}  // namespace modfix
