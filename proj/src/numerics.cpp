#include "tdlpt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tdlpt {

RadialGrid::RadialGrid(double r_min, double dr, std::size_t n)
    : r_min_(r_min), dr_(dr), points_(n), weights_(n, dr) {
    for (std::size_t k = 0; k < n; ++k) {
        points_[k] = r_min + static_cast<double>(k) * dr;
    }
    weights_.front() = 0.5 * dr;
    weights_.back() = 0.5 * dr;
}

std::shared_ptr<const RadialGrid> RadialGrid::build(double r_min, double r_max, double dr,
                                                    bool allow_negative) {
    if (!(dr > 0.0) || !std::isfinite(dr)) {
        throw std::invalid_argument("grid spacing must be positive");
    }
    if (!(r_max > r_min)) {
        throw std::invalid_argument("grid bounds are inverted");
    }
    if (!allow_negative && r_min < 0.0) {
        throw std::invalid_argument("radial grid must start at r_min >= 0");
    }
    // The small slack keeps (0, 1, 0.5) at three points despite rounding.
    const double intervals = std::floor((r_max - r_min) / dr * (1.0 + 1e-12) + 1e-9);
    const auto n = static_cast<std::size_t>(intervals) + 1;
    if (n < 3) {
        throw std::invalid_argument("grid needs at least three points");
    }
    return std::shared_ptr<const RadialGrid>(new RadialGrid(r_min, dr, n));
}

bool RadialGrid::same_as(const RadialGrid& other) const {
    if (this == &other) return true;
    return size() == other.size() && r_min_ == other.r_min_ && dr_ == other.dr_;
}

void require_same_grid(const RadialGrid& a, const RadialGrid& b, const char* context) {
    if (!a.same_as(b)) {
        throw std::invalid_argument(std::string(context) + ": fields live on different grids");
    }
}

ComplexField::ComplexField(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size()) {}

ComplexField::ComplexField(GridPtr grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size()) {
        throw std::invalid_argument("field length does not match grid");
    }
}

bool ComplexField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](const cplx& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

double ComplexField::max_abs() const {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
}

// ---------------------------------------------------------------------------

TridiagonalOperator::TridiagonalOperator(std::size_t n) : sub_(n), diag_(n), super_(n) {}

TridiagonalOperator TridiagonalOperator::identity(std::size_t n) {
    TridiagonalOperator op(n);
    std::fill(op.diag_.begin(), op.diag_.end(), cplx(1.0));
    return op;
}

TridiagonalOperator TridiagonalOperator::from_coefficients(
    const RadialGrid& grid, const std::function<cplx(double)>& a2,
    const std::function<cplx(double)>& a1, const std::function<cplx(double)>& a0) {
    const std::size_t n = grid.size();
    const double h = grid.dr();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 0.5 / h;
    TridiagonalOperator op(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = grid.point(k);
        const cplx c2 = a2 ? a2(x) : cplx(0.0);
        const cplx c1 = a1 ? a1(x) : cplx(0.0);
        const cplx c0 = a0 ? a0(x) : cplx(0.0);
        op.sub_[k] = c2 * inv_h2 - c1 * inv_2h;
        op.diag_[k] = -2.0 * c2 * inv_h2 + c0;
        op.super_[k] = c2 * inv_h2 + c1 * inv_2h;
    }
    op.sub_.front() = 0.0;
    op.super_.back() = 0.0;
    return op;
}

void TridiagonalOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
    const std::size_t n = size();
    if (in.size() != n || out.size() != n) {
        throw std::invalid_argument("tridiagonal apply: size mismatch");
    }
    if (n == 1) {
        out[0] = diag_[0] * in[0];
        return;
    }
    out[0] = diag_[0] * in[0] + super_[0] * in[1];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        out[k] = sub_[k] * in[k - 1] + diag_[k] * in[k] + super_[k] * in[k + 1];
    }
    out[n - 1] = sub_[n - 1] * in[n - 2] + diag_[n - 1] * in[n - 1];
}

ComplexField TridiagonalOperator::apply(const ComplexField& in) const {
    ComplexField out(in.grid_ptr());
    apply(in.values(), out.values());
    return out;
}

TridiagonalOperator TridiagonalOperator::affine(cplx scale, cplx shift) const {
    TridiagonalOperator op(size());
    for (std::size_t k = 0; k < size(); ++k) {
        op.sub_[k] = scale * sub_[k];
        op.diag_[k] = scale * diag_[k] + shift;
        op.super_[k] = scale * super_[k];
    }
    return op;
}

bool TridiagonalOperator::is_hermitian(double tol) const {
    for (std::size_t k = 0; k < size(); ++k) {
        if (std::abs(diag_[k].imag()) > tol) return false;
        if (k + 1 < size() && std::abs(super_[k] - std::conj(sub_[k + 1])) > tol) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

TridiagonalFactorization::TridiagonalFactorization(const TridiagonalOperator& op)
    : sub_(op.sub().begin(), op.sub().end()), upper_(op.size()), inv_pivot_(op.size()) {
    const std::size_t n = op.size();
    const auto a = op.sub();
    const auto b = op.diag();
    const auto c = op.super();
    for (std::size_t k = 0; k < n; ++k) {
        const double scale =
            std::max({std::abs(b[k]), k > 0 ? std::abs(a[k]) : 0.0, k + 1 < n ? std::abs(c[k]) : 0.0});
        const cplx pivot = k == 0 ? b[0] : b[k] - a[k] * upper_[k - 1];
        if (!(std::abs(pivot) > 1e-14 * scale) || scale == 0.0) {
            std::ostringstream msg;
            msg << "singular tridiagonal system: pivot " << std::abs(pivot) << " at row " << k;
            throw NumericalError(msg.str());
        }
        inv_pivot_[k] = 1.0 / pivot;
        upper_[k] = k + 1 < n ? c[k] * inv_pivot_[k] : cplx(0.0);
    }
}

void TridiagonalFactorization::solve_in_place(std::span<cplx> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw std::invalid_argument("tridiagonal solve: size mismatch");
    rhs[0] *= inv_pivot_[0];
    for (std::size_t k = 1; k < n; ++k) {
        rhs[k] = (rhs[k] - sub_[k] * rhs[k - 1]) * inv_pivot_[k];
    }
    for (std::size_t k = n - 1; k-- > 0;) {
        rhs[k] -= upper_[k] * rhs[k + 1];
    }
}

ComplexField solve_tridiagonal(const TridiagonalOperator& op, const ComplexField& rhs) {
    if (op.size() != rhs.size()) throw std::invalid_argument("tridiagonal solve: size mismatch");
    TridiagonalFactorization lu(op);
    ComplexField x = rhs;
    lu.solve_in_place(x.values());
    return x;
}

// ---------------------------------------------------------------------------

void SourcedEvolutionProblem::validate() const {
    const std::size_t n = generator.size();
    if (initial.size() != n) {
        throw std::invalid_argument("evolution problem: initial field does not match operator size");
    }
    auto check = [&](const BoundaryCondition& bc, std::size_t edge, std::size_t inner, const char* side) {
        const cplx expected =
            bc.kind == BoundaryCondition::Kind::Dirichlet ? bc.value : bc.value * initial[inner];
        if (std::abs(initial[edge] - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
            throw std::invalid_argument(std::string("evolution problem: initial field violates ") + side +
                                        " boundary condition");
        }
    };
    check(lower, 0, 1, "lower");
    check(upper, n - 1, n - 2, "upper");
}

namespace {

TridiagonalOperator implicit_matrix(const TridiagonalOperator& generator, double dt,
                                    const BoundaryCondition& lower, const BoundaryCondition& upper) {
    TridiagonalOperator m = generator.affine(cplx(0.0, 0.5 * dt), 1.0);
    const std::size_t n = m.size();
    m.diag()[0] = 1.0;
    m.super()[0] = lower.kind == BoundaryCondition::Kind::Ratio ? -lower.value : cplx(0.0);
    m.diag()[n - 1] = 1.0;
    m.sub()[n - 1] = upper.kind == BoundaryCondition::Kind::Ratio ? -upper.value : cplx(0.0);
    return m;
}

}  // namespace

CrankNicolsonStepper::CrankNicolsonStepper(const TridiagonalOperator& generator, double dt,
                                           BoundaryCondition lower, BoundaryCondition upper)
    : n_(generator.size()),
      dt_(dt),
      lower_(lower),
      upper_(upper),
      implicit_(implicit_matrix(generator, dt, lower, upper)),
      rhs_(generator.size()) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (n_ < 3) throw std::invalid_argument("stepper needs at least three points");
    const cplx half = cplx(0.0, -0.5 * dt);
    ex_sub_.resize(n_);
    ex_diag_.resize(n_);
    ex_super_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        ex_sub_[k] = half * generator.sub()[k];
        ex_diag_[k] = 1.0 + half * generator.diag()[k];
        ex_super_[k] = half * generator.super()[k];
    }
}

void CrankNicolsonStepper::step(std::span<cplx> u, std::span<const cplx> source_mid) {
    if (u.size() != n_) throw std::invalid_argument("stepper: state size mismatch");
    const bool sourced = !source_mid.empty();
    if (sourced && source_mid.size() != n_) throw std::invalid_argument("stepper: source size mismatch");
    const cplx minus_i_dt(0.0, -dt_);
    cplx* rhs = rhs_.data();
    const cplx* x = u.data();
    for (std::size_t k = 1; k + 1 < n_; ++k) {
        rhs[k] = ex_sub_[k] * x[k - 1] + ex_diag_[k] * x[k] + ex_super_[k] * x[k + 1];
    }
    if (sourced) {
        for (std::size_t k = 1; k + 1 < n_; ++k) rhs[k] += minus_i_dt * source_mid[k];
    }
    rhs[0] = lower_.kind == BoundaryCondition::Kind::Dirichlet ? lower_.value : cplx(0.0);
    rhs[n_ - 1] = upper_.kind == BoundaryCondition::Kind::Dirichlet ? upper_.value : cplx(0.0);
    implicit_.solve_in_place(rhs_);
    std::copy(rhs_.begin(), rhs_.end(), u.begin());
}

ComplexField crank_nicolson_step(const SourcedEvolutionProblem& problem, const ComplexField& u,
                                 double t, double dt) {
    if (u.size() != problem.generator.size()) throw std::invalid_argument("stepper: state size mismatch");
    CrankNicolsonStepper stepper(problem.generator, dt, problem.lower, problem.upper);
    ComplexField out = u;
    if (problem.source) {
        std::vector<cplx> f(u.size());
        problem.source(t + 0.5 * dt, f);
        stepper.step(out.values(), f);
    } else {
        stepper.step(out.values(), {});
    }
    if (!out.all_finite()) throw NumericalError("Crank-Nicolson step produced non-finite values");
    return out;
}

// ---------------------------------------------------------------------------

cplx quadrature(const ComplexField& field, const ComplexField& weight_field) {
    require_same_grid(field.grid(), weight_field.grid(), "quadrature");
    const auto w = field.grid().weights();
    cplx sum = 0.0;
    for (std::size_t k = 0; k < field.size(); ++k) sum += w[k] * field[k] * weight_field[k];
    return sum;
}

cplx integrate(const RadialGrid& grid, std::span<const cplx> values) {
    if (values.size() != grid.size()) throw std::invalid_argument("integrate: size mismatch");
    const auto w = grid.weights();
    cplx sum = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) sum += w[k] * values[k];
    return sum;
}

double integrate(const RadialGrid& grid, std::span<const double> values) {
    if (values.size() != grid.size()) throw std::invalid_argument("integrate: size mismatch");
    const auto w = grid.weights();
    double sum = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) sum += w[k] * values[k];
    return sum;
}

std::vector<cplx> first_derivative(const RadialGrid& grid, std::span<const cplx> values) {
    const std::size_t n = grid.size();
    if (values.size() != n) throw std::invalid_argument("first_derivative: size mismatch");
    const double h = grid.dr();
    std::vector<cplx> d(n);
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (values[k + 1] - values[k - 1]) / (2.0 * h);
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    return d;
}

cplx simpson(std::span<const cplx> samples, double h) {
    const std::size_t n = samples.size();
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("simpson: need an even number of intervals");
    cplx odd = 0.0;
    cplx even = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) (k % 2 ? odd : even) += samples[k];
    return h / 3.0 * (samples.front() + samples.back() + 4.0 * odd + 2.0 * even);
}

}  // namespace tdlpt
