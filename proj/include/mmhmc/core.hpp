#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace mmhmc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Recoverable failure of a model evaluation (overflow, domain violation).
// Samplers map it to a proposal rejection.
struct EvalError : std::runtime_error {
    int index;  // offending coordinate, -1 if not attributable
    explicit EvalError(const std::string& what, int idx = -1)
        : std::runtime_error(what), index(idx) {}
};

struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Position/momentum pair on the joint state space.
struct PhasePoint {
    Vector theta;
    Vector p;

    PhasePoint() = default;
    PhasePoint(Vector t, Vector m) : theta(std::move(t)), p(std::move(m)) {
        if (theta.size() != p.size() || theta.size() < 1)
            throw ContractError("PhasePoint: theta and p must have identical length >= 1");
    }
    Eigen::Index dim() const { return theta.size(); }
    bool finite() const { return theta.allFinite() && p.allFinite(); }
};

// Identity or diagonal mass matrix M.
class MassSpec {
  public:
    static MassSpec identity() { return MassSpec{}; }
    static MassSpec diagonal(Vector d) {
        if (d.size() < 1 || (d.array() <= 0.0).any())
            throw ContractError("MassSpec: diagonal entries must be strictly positive");
        MassSpec m;
        m.diag_ = std::move(d);
        return m;
    }

    bool is_identity() const { return diag_.size() == 0; }
    Eigen::Index dim_or_zero() const { return diag_.size(); }

    void check_dim(Eigen::Index d) const {
        if (!is_identity() && diag_.size() != d)
            throw ContractError("MassSpec: dimension mismatch");
    }

    // M^{-1} v
    Vector apply_inv(const Vector& v) const {
        if (is_identity()) return v;
        check_dim(v.size());
        return (v.array() / diag_.array()).matrix();
    }

    double inv_quad(const Vector& v) const {  // v^T M^{-1} v
        if (is_identity()) return v.squaredNorm();
        check_dim(v.size());
        return (v.array().square() / diag_.array()).sum();
    }

    double inv_bilin(const Vector& v, const Vector& w) const {  // v^T M^{-1} w
        if (is_identity()) return v.dot(w);
        check_dim(v.size());
        return (v.array() * w.array() / diag_.array()).sum();
    }

    const Vector& diag() const { return diag_; }

  private:
    Vector diag_;  // empty means identity
};

// Evaluation contract for a target distribution pi(theta) ~ exp(-U(theta)).
// Implementations must be reentrant: no interior mutable state.
class TargetModel {
  public:
    virtual ~TargetModel() = default;

    virtual int dim() const = 0;

    // U(theta); throws EvalError on overflow / domain violation.
    virtual double potential(const Vector& theta) const = 0;

    // Fused U(theta) and its gradient. Models override this with a shared
    // computation; the default composes the two virtuals.
    virtual double eval(const Vector& theta, Vector& grad) const {
        gradient(theta, grad);
        return potential(theta);
    }

    virtual void gradient(const Vector& theta, Vector& grad) const = 0;

    virtual bool has_hessian() const { return false; }
    virtual bool has_third() const { return false; }
    virtual bool has_fourth() const { return false; }
    // True when U is a quadratic form: third/fourth derivatives vanish.
    virtual bool is_quadratic() const { return false; }

    // U_thth(theta) v
    virtual void hessian_vec(const Vector& /*theta*/, const Vector& /*v*/, Vector& /*out*/) const {
        throw CapabilityError("model does not provide a Hessian");
    }

    // Contraction U_ththth(theta)[., v, v] as a vector.
    virtual void third_vec(const Vector& /*theta*/, const Vector& /*v*/, Vector& /*out*/) const {
        throw CapabilityError("model does not provide third-derivative contractions");
    }

    // Full contraction U_thththth(theta)[v, v, v, v].
    virtual double fourth_quad(const Vector& /*theta*/, const Vector& /*v*/) const {
        throw CapabilityError("model does not provide fourth-derivative contractions");
    }
};

// K(p) = 1/2 p^T M^{-1} p.  The constant 1/2 log((2pi)^D |M|) is dropped:
// only differences of H and the gap H~ - H are ever used, and the constant
// cancels in both.
inline double kinetic_energy(const Vector& p, const MassSpec& mass) {
    mass.check_dim(p.size());
    return 0.5 * mass.inv_quad(p);
}

// H(theta, p) = U(theta) + K(p)
inline double true_hamiltonian(const PhasePoint& x, const TargetModel& model,
                               const MassSpec& mass) {
    if (x.dim() != model.dim()) throw ContractError("true_hamiltonian: dimension mismatch");
    return model.potential(x.theta) + kinetic_energy(x.p, mass);
}

// p ~ N(0, M)
inline Vector draw_momentum(Eigen::Index dim, const MassSpec& mass, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Vector p(dim);
    for (Eigen::Index i = 0; i < dim; ++i) p[i] = nd(rng);
    if (!mass.is_identity()) {
        mass.check_dim(dim);
        p.array() *= mass.diag().array().sqrt();
    }
    return p;
}

}  // namespace mmhmc
