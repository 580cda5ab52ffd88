#pragma once

#include <vector>

#include "weyl/errors.hpp"
#include "weyl/types.hpp"

namespace weyl {

// Uniform time grid on [0, T]. States live on the n_steps+1 nodes,
// field samples live on the n_steps interval midpoints.
class TimeGrid {
public:
    TimeGrid(double t_final, int n_steps) : t_final_(t_final), n_steps_(n_steps) {
        if (t_final <= 0.0) throw ConfigError("t_final must be positive");
        if (n_steps < 2) throw ConfigError("n_steps must be at least 2");
    }

    double t_final() const { return t_final_; }
    int n_steps() const { return n_steps_; }
    int n_nodes() const { return n_steps_ + 1; }
    double dt() const { return t_final_ / n_steps_; }

    double node(int i) const { return t_final_ * i / n_steps_; }
    double midpoint(int i) const { return t_final_ * (i + 0.5) / n_steps_; }

    bool operator==(const TimeGrid& other) const {
        return t_final_ == other.t_final_ && n_steps_ == other.n_steps_;
    }

private:
    double t_final_;
    int n_steps_;
};

// Sampled real control field, one sample per grid midpoint.
class ControlField {
public:
    ControlField(TimeGrid grid, RealVector values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.n_steps())
            throw DimensionMismatch("field samples vs grid midpoints");
        if (!values_.allFinite()) throw Error("control field contains non-finite samples");
    }

    static ControlField constant(const TimeGrid& grid, double value) {
        return ControlField(grid, RealVector::Constant(grid.n_steps(), value));
    }

    const TimeGrid& grid() const { return grid_; }
    const RealVector& values() const { return values_; }
    RealVector& values() { return values_; }
    double operator[](int i) const { return values_[i]; }
    int size() const { return static_cast<int>(values_.size()); }

private:
    TimeGrid grid_;
    RealVector values_;
};

// Shape function S(t) in [0, 1] gating field updates (and the fluence
// weight 1/S(t)).  sin^2(pi t / T) switches smoothly on and off.
class ShapeFunction {
public:
    enum class Kind { SinSquared, Flat, CustomSamples };

    static ShapeFunction sin_squared() { return ShapeFunction(Kind::SinSquared, {}); }
    static ShapeFunction flat() { return ShapeFunction(Kind::Flat, {}); }
    static ShapeFunction from_samples(RealVector samples) {
        if ((samples.array() < 0.0).any() || (samples.array() > 1.0).any())
            throw ConfigError("shape samples must lie in [0, 1]");
        return ShapeFunction(Kind::CustomSamples, std::move(samples));
    }

    Kind kind() const { return kind_; }

    // Value at time t for a run of total duration T. Custom samples are
    // indexed by midpoint; callers with custom shapes must match the grid.
    double value(double t, double t_total) const {
        switch (kind_) {
            case Kind::SinSquared: {
                const double s = std::sin(PI * t / t_total);
                return s * s;
            }
            case Kind::Flat:
                return 1.0;
            case Kind::CustomSamples: {
                const int n = static_cast<int>(samples_.size());
                int i = static_cast<int>(t / t_total * n);
                if (i < 0) i = 0;
                if (i >= n) i = n - 1;
                return samples_[i];
            }
        }
        return 1.0;
    }

    // Samples on the midpoints of a grid.
    RealVector sample_midpoints(const TimeGrid& grid) const {
        if (kind_ == Kind::CustomSamples) {
            if (samples_.size() != grid.n_steps())
                throw DimensionMismatch("custom shape samples vs grid midpoints");
            return samples_;
        }
        RealVector out(grid.n_steps());
        for (int i = 0; i < grid.n_steps(); ++i) out[i] = value(grid.midpoint(i), grid.t_final());
        return out;
    }

private:
    ShapeFunction(Kind kind, RealVector samples) : kind_(kind), samples_(std::move(samples)) {}

    Kind kind_;
    RealVector samples_;
};

}  // namespace weyl
