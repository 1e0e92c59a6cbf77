#include "modfix/grid.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace modfix {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw DomainError(std::string(what) + " contains a non-finite value");
        }
    }
}

}  // namespace

MeasureGrid::MeasureGrid(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw ParameterError("grid must have at least one point");
    }
    if (points_.size() != weights_.size()) {
        throw AlignmentError("grid points and weights must have equal length");
    }
    require_finite(points_, "grid points");
    for (double w : weights_) {
        if (!std::isfinite(w) || w <= 0.0) {
            throw ParameterError("grid weights must be positive and finite");
        }
    }
}

MeasureGrid MeasureGrid::scalar() { return MeasureGrid({0.0}, {1.0}); }

MeasureGrid MeasureGrid::uniform(std::size_t n) {
    if (n == 0) {
        throw ParameterError("grid must have at least one point");
    }
    std::vector<double> points(n);
    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        points[i] = static_cast<double>(i);
    }
    return MeasureGrid(std::move(points), std::move(weights));
}

FnVec::FnVec(std::vector<double> values) : values_(std::move(values)) {
    require_finite(values_, "function vector");
}

FnVec::FnVec(std::initializer_list<double> values) : FnVec(std::vector<double>(values)) {}

FnVec FnVec::scalar(double v) { return FnVec({v}); }

FnVec FnVec::constant(std::size_t n, double v) { return FnVec(std::vector<double>(n, v)); }

DomainBox::DomainBox(FnVec lower, FnVec upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    require_aligned(lower_, upper_);
    if (lower_.empty()) {
        throw ParameterError("domain box must be nonempty");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (lower_[i] > upper_[i]) {
            throw ParameterError("domain box lower bound exceeds upper bound at index " +
                                 std::to_string(i));
        }
    }
}

DomainBox DomainBox::scalar(double lo, double hi) {
    return DomainBox(FnVec::scalar(lo), FnVec::scalar(hi));
}

bool DomainBox::contains(const FnVec& f) const {
    if (f.size() != lower_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < lower_[i] || f[i] > upper_[i]) {
            return false;
        }
    }
    return true;
}

void require_aligned(const MeasureGrid& grid, const FnVec& f) {
    if (grid.size() != f.size()) {
        throw AlignmentError("vector of length " + std::to_string(f.size()) +
                             " not aligned to grid of size " + std::to_string(grid.size()));
    }
}

void require_aligned(const FnVec& a, const FnVec& b) {
    if (a.size() != b.size()) {
        throw AlignmentError("vectors of lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()) + " are not aligned");
    }
}

FnVec sub(const FnVec& f, const FnVec& g) {
    require_aligned(f, g);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = f[i] - g[i];
    }
    return FnVec(std::move(out));
}

FnVec scale(const FnVec& f, double c) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = c * f[i];
    }
    return FnVec(std::move(out));
}

FnVec convex_combine(const FnVec& f, const FnVec& g, double t) {
    require_aligned(f, g);
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ParameterError("convex combination parameter must lie in [0,1]");
    }
    if (t == 0.0) {
        return f;
    }
    if (t == 1.0) {
        return g;
    }
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = std::fma(t, g[i] - f[i], f[i]);
    }
    return FnVec(std::move(out));
}

FnVec sample_point(const DomainBox& box, SampleRng& rng) {
    std::vector<double> out(box.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::fma(rng.uniform01(), box.upper()[i] - box.lower()[i], box.lower()[i]);
    }
    return FnVec(std::move(out));
}

std::vector<FnVec> sample_domain(const DomainBox& box, std::size_t count, std::uint64_t seed) {
    if (count == 0) {
        throw ParameterError("sample count must be > 0");
    }
    SampleRng rng(seed);
    std::vector<FnVec> out;
    out.reserve(count);
    out.push_back(box.lower());
    if (count > 1) {
        out.push_back(box.upper());
    }
    while (out.size() < count) {
        out.push_back(sample_point(box, rng));
    }
    return out;
}

}  // namespace modfix
