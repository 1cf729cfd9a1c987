#pragma once

// Grids, quadrature, complex tridiagonal algebra and the Crank-Nicolson
// stepper for sourced linear evolution problems  i du/dt = L u + f(t).

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace tdlpt {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Raised when a solver meets a singular system or non-finite data.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform 1-D grid r_k = r_min + k*dr with trapezoid weights.
class RadialGrid {
public:
    /// Points r_min + k*dr, truncated so that the last point is <= r_max.
    /// Throws std::invalid_argument for dr <= 0, r_max <= r_min, r_min < 0
    /// (unless allow_negative is set, for Cartesian intervals) or fewer
    /// than three points.
    static std::shared_ptr<const RadialGrid> build(double r_min, double r_max, double dr,
                                                   bool allow_negative = false);

    double r_min() const { return r_min_; }
    double r_max() const { return r_min_ + static_cast<double>(points_.size() - 1) * dr_; }
    double dr() const { return dr_; }
    std::size_t size() const { return points_.size(); }
    double point(std::size_t k) const { return points_[k]; }
    std::span<const double> points() const { return points_; }
    std::span<const double> weights() const { return weights_; }

    bool same_as(const RadialGrid& other) const;

private:
    RadialGrid(double r_min, double dr, std::size_t n);

    double r_min_;
    double dr_;
    std::vector<double> points_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Throws std::invalid_argument if the two grids differ.
void require_same_grid(const RadialGrid& a, const RadialGrid& b, const char* context);

/// Complex samples on a grid.
class ComplexField {
public:
    explicit ComplexField(GridPtr grid);
    ComplexField(GridPtr grid, std::vector<cplx> values);

    template <typename F>
    static ComplexField from_function(GridPtr grid, F&& f) {
        std::vector<cplx> values(grid->size());
        for (std::size_t k = 0; k < values.size(); ++k) {
            values[k] = cplx(f(grid->point(k)));
        }
        return ComplexField(std::move(grid), std::move(values));
    }

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    std::span<cplx> values() { return values_; }
    std::span<const cplx> values() const { return values_; }
    cplx& operator[](std::size_t k) { return values_[k]; }
    const cplx& operator[](std::size_t k) const { return values_[k]; }

    bool all_finite() const;
    double max_abs() const;

private:
    GridPtr grid_;
    std::vector<cplx> values_;
};

/// Three-band matrix; sub[0] and super[n-1] are unused.
class TridiagonalOperator {
public:
    explicit TridiagonalOperator(std::size_t n);

    static TridiagonalOperator identity(std::size_t n);

    /// a2(x) d^2/dx^2 + a1(x) d/dx + a0(x) by second-order central
    /// differences. Edge rows keep the truncated stencil.
    static TridiagonalOperator from_coefficients(const RadialGrid& grid,
                                                 const std::function<cplx(double)>& a2,
                                                 const std::function<cplx(double)>& a1,
                                                 const std::function<cplx(double)>& a0);

    std::size_t size() const { return diag_.size(); }
    std::span<cplx> sub() { return sub_; }
    std::span<cplx> diag() { return diag_; }
    std::span<cplx> super() { return super_; }
    std::span<const cplx> sub() const { return sub_; }
    std::span<const cplx> diag() const { return diag_; }
    std::span<const cplx> super() const { return super_; }

    void apply(std::span<const cplx> in, std::span<cplx> out) const;
    ComplexField apply(const ComplexField& in) const;

    /// shift*I + scale*this
    TridiagonalOperator affine(cplx scale, cplx shift) const;

    bool is_hermitian(double tol = 0.0) const;

private:
    std::vector<cplx> sub_;
    std::vector<cplx> diag_;
    std::vector<cplx> super_;
};

/// Pre-factored Thomas elimination for repeated solves with one matrix.
class TridiagonalFactorization {
public:
    /// Throws NumericalError when a pivot falls below 1e-14 of its row scale.
    explicit TridiagonalFactorization(const TridiagonalOperator& op);

    void solve_in_place(std::span<cplx> rhs) const;
    std::size_t size() const { return inv_pivot_.size(); }

private:
    std::vector<cplx> sub_;
    std::vector<cplx> upper_;      // modified super-diagonal c'_k
    std::vector<cplx> inv_pivot_;  // 1 / (b_k - a_k c'_{k-1})
};

ComplexField solve_tridiagonal(const TridiagonalOperator& op, const ComplexField& rhs);

/// Edge closure for the stepper: a fixed value, or u_edge = ratio * u_neighbour.
struct BoundaryCondition {
    enum class Kind { Dirichlet, Ratio };
    Kind kind = Kind::Dirichlet;
    cplx value{0.0, 0.0};

    static BoundaryCondition dirichlet(cplx v = 0.0) { return {Kind::Dirichlet, v}; }
    static BoundaryCondition ratio(cplx c) { return {Kind::Ratio, c}; }
};

/// Writes f(t) into out; out arrives zeroed.
using SourceFunction = std::function<void(double t, std::span<cplx> out)>;

struct SourcedEvolutionProblem {
    TridiagonalOperator generator;
    SourceFunction source;  // empty means f == 0
    ComplexField initial;
    BoundaryCondition lower = BoundaryCondition::dirichlet();
    BoundaryCondition upper = BoundaryCondition::dirichlet();

    /// Throws std::invalid_argument if sizes disagree or the initial field
    /// violates a boundary condition.
    void validate() const;
};

/// Crank-Nicolson for i du/dt = L u + f with the source sampled at the
/// step midpoint:
///   (1 + i dt/2 L) u_new = (1 - i dt/2 L) u_old - i dt f(t + dt/2).
/// Edge rows are replaced by the boundary closures.
class CrankNicolsonStepper {
public:
    CrankNicolsonStepper(const TridiagonalOperator& generator, double dt,
                         BoundaryCondition lower = BoundaryCondition::dirichlet(),
                         BoundaryCondition upper = BoundaryCondition::dirichlet());

    /// source_mid may be empty (no source).
    void step(std::span<cplx> u, std::span<const cplx> source_mid);

    double dt() const { return dt_; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    double dt_;
    BoundaryCondition lower_;
    BoundaryCondition upper_;
    std::vector<cplx> ex_sub_, ex_diag_, ex_super_;  // 1 - i dt/2 L
    TridiagonalFactorization implicit_;
    std::vector<cplx> rhs_;
};

ComplexField crank_nicolson_step(const SourcedEvolutionProblem& problem, const ComplexField& u,
                                 double t, double dt);

/// sum_k w_k field_k weight_k
cplx quadrature(const ComplexField& field, const ComplexField& weight_field);
cplx integrate(const RadialGrid& grid, std::span<const cplx> values);
double integrate(const RadialGrid& grid, std::span<const double> values);

/// Central differences inside, second-order one-sided at the edges.
std::vector<cplx> first_derivative(const RadialGrid& grid, std::span<const cplx> values);

/// Composite Simpson on a uniform mesh with an even number of intervals.
cplx simpson(std::span<const cplx> samples, double h);

}  // namespace tdlpt
