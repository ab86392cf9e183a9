#pragma once

// Exact model of the driven three-level system: Hamiltonian, Liouvillian,
// time evolution, steady state and weak-field order extraction.
//
// Density matrices are vectorized by column stacking: vec(rho)[3 * col + row]
// holds rho(row, col). Levels |1>, |2>, |3> map to indices 0, 1, 2.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "deltamix/error.hpp"
#include "deltamix/types.hpp"

namespace deltamix {

using Matrix3 = Eigen::Matrix<Complex, 3, 3>;
using Matrix9 = Eigen::Matrix<Complex, 9, 9>;
using Vector9 = Eigen::Matrix<Complex, 9, 1>;

inline Vector9 vectorize(const Matrix3& m) {
  Vector9 v;
  for (int col = 0; col < 3; ++col)
    for (int row = 0; row < 3; ++row) v(3 * col + row) = m(row, col);
  return v;
}

inline Matrix3 unvectorize(const Vector9& v) {
  Matrix3 m;
  for (int col = 0; col < 3; ++col)
    for (int row = 0; row < 3; ++row) m(row, col) = v(3 * col + row);
  return m;
}

/// |i><j| with 1-based level labels.
inline Matrix3 transition(int i, int j) {
  Matrix3 m = Matrix3::Zero();
  m(i - 1, j - 1) = 1.0;
  return m;
}

inline double hermiticity_defect(const Matrix3& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// State of the artificial atom in the |1>, |2>, |3> basis.
class DensityMatrix3 {
 public:
  DensityMatrix3() : rho_(Matrix3::Zero()) { rho_(0, 0) = 1.0; }
  explicit DensityMatrix3(const Matrix3& rho) : rho_(rho) {}

  static DensityMatrix3 ground_state() { return DensityMatrix3(); }

  /// Pure state |level><level| (1-based label).
  static DensityMatrix3 level(int level) { return DensityMatrix3(transition(level, level)); }

  const Matrix3& matrix() const noexcept { return rho_; }

  /// rho_ij = <i|rho|j> with 1-based level labels, e.g. element(2, 1) is rho21.
  Complex element(int i, int j) const { return rho_(i - 1, j - 1); }

  Complex trace() const { return rho_.trace(); }
  double hermiticity_defect() const { return deltamix::hermiticity_defect(rho_); }

  double min_eigenvalue() const {
    const Matrix3 herm = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix3> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

 private:
  Matrix3 rho_;
};

/// Generator of d vec(rho)/dt = L vec(rho) in column-stacking order.
struct Liouvillian {
  Matrix9 matrix = Matrix9::Zero();

  Matrix3 apply(const Matrix3& rho) const { return unvectorize(matrix * vectorize(rho)); }

  /// max |vec(I)^T L|; zero for a trace-preserving generator.
  double trace_defect() const {
    const Vector9 id = vectorize(Matrix3::Identity());
    return (id.transpose() * matrix).cwiseAbs().maxCoeff();
  }
};

/// H = delta_d (s22 + s33) - 1/2 [(Od + Otd) s21 + Oc s32 + (Os + Ots) s31 + h.c.]
inline Matrix3 build_hamiltonian(const DriveConfiguration& config) {
  const Complex f12 = config.field_12();
  const Complex f23 = config.control_c.amplitude();
  const Complex f13 = config.field_13();

  Matrix3 h = Matrix3::Zero();
  h(1, 1) = config.delta_d;
  h(2, 2) = config.delta_d;
  h(1, 0) = -0.5 * f12;
  h(2, 1) = -0.5 * f23;
  h(2, 0) = -0.5 * f13;
  h(0, 1) = std::conj(h(1, 0));
  h(1, 2) = std::conj(h(2, 1));
  h(0, 2) = std::conj(h(2, 0));
  return h;
}

namespace detail {

inline Matrix9 kron(const Matrix3& a, const Matrix3& b) {
  Matrix9 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return out;
}

// Superoperator of rho -> left * rho * right.
inline Matrix9 sandwich(const Matrix3& left, const Matrix3& right) {
  return kron(right.transpose(), left);
}

// rate/2 * (2 C rho C^+ - C^+C rho - rho C^+C)
inline Matrix9 dissipator(const Matrix3& jump, double rate) {
  const Matrix3 id = Matrix3::Identity();
  const Matrix3 cdc = jump.adjoint() * jump;
  return 0.5 * rate *
         (2.0 * sandwich(jump, jump.adjoint()) - sandwich(cdc, id) - sandwich(id, cdc));
}

}  // namespace detail

/// Liouvillian of the master equation: coherent part plus the three downward
/// relaxation channels s12, s13, s23 and pure dephasing on levels 2 and 3.
inline Liouvillian build_liouvillian(const Matrix3& hamiltonian, const RelaxationRates& rates) {
  if (hermiticity_defect(hamiltonian) > 1e-10) {
    throw ContractError("Hamiltonian is not Hermitian");
  }
  const Matrix3 id = Matrix3::Identity();
  Liouvillian l;
  l.matrix = -kI * (detail::sandwich(hamiltonian, id) - detail::sandwich(id, hamiltonian));
  l.matrix += detail::dissipator(transition(1, 2), rates.gamma12());
  l.matrix += detail::dissipator(transition(1, 3), rates.gamma13());
  l.matrix += detail::dissipator(transition(2, 3), rates.gamma23());
  l.matrix += detail::dissipator(transition(2, 2), rates.gphi2());
  l.matrix += detail::dissipator(transition(3, 3), rates.gphi3());
  return l;
}

inline Liouvillian build_liouvillian(const DriveConfiguration& config, const RelaxationRates& rates) {
  return build_liouvillian(build_hamiltonian(config), rates);
}

struct EvolutionResult {
  DensityMatrix3 state;
  /// max |rho - (rho + rho^+)/2| removed by the final re-Hermitization.
  double hermiticity_correction = 0.0;
  /// |trace(rho) - trace(rho0)| at the end of the run.
  double trace_drift = 0.0;
  std::size_t steps = 0;
};

/// Classical RK4 on d vec(rho)/dt = L vec(rho). The duration is split into
/// ceil(duration / step) equal steps, so the step actually used never exceeds
/// the requested one.
inline EvolutionResult evolve(const DensityMatrix3& rho0, const Liouvillian& l, double duration,
                              double step) {
  if (!(step > 0.0)) throw ContractError("evolve: step must be > 0");
  if (!(duration >= 0.0)) throw ContractError("evolve: duration must be >= 0");

  EvolutionResult result{rho0, 0.0, 0.0, 0};
  if (duration == 0.0) return result;

  const auto n = static_cast<std::size_t>(std::ceil(duration / step - 1e-12));
  const double h = duration / static_cast<double>(n);
  const Complex trace0 = rho0.trace();

  Vector9 x = vectorize(rho0.matrix());
  for (std::size_t k = 0; k < n; ++k) {
    const Vector9 k1 = l.matrix * x;
    const Vector9 k2 = l.matrix * (x + 0.5 * h * k1);
    const Vector9 k3 = l.matrix * (x + 0.5 * h * k2);
    const Vector9 k4 = l.matrix * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  const Matrix3 raw = unvectorize(x);
  const double drift = std::abs(raw.trace() - trace0);
  if (!(drift <= 1e-6)) {
    throw IntegrationError("evolve: trace drifted by " + std::to_string(drift) +
                           "; reduce the step size");
  }
  const Matrix3 herm = 0.5 * (raw + raw.adjoint());
  result.state = DensityMatrix3(herm);
  result.hermiticity_correction = (raw - herm).cwiseAbs().maxCoeff();
  result.trace_drift = drift;
  result.steps = n;
  return result;
}

/// Index of the population row replaced by the trace constraint.
///
/// Only the rows of d(rho_kk)/dt are eligible: they sum to zero, so dropping
/// any one of them loses no information. Among them the row with the smallest
/// norm wins; ties go to the lower level.
inline int trace_constraint_row(const Liouvillian& l) {
  int best = 0;
  double best_norm = l.matrix.row(0).norm();
  for (int level = 1; level < 3; ++level) {
    const int row = 4 * level;
    const double norm = l.matrix.row(row).norm();
    if (norm < best_norm) {
      best_norm = norm;
      best = row;
    }
  }
  return best;
}

/// Unique trace-one fixed point of L.
inline DensityMatrix3 steady_state(const Liouvillian& l) {
  Matrix9 a = l.matrix;
  Vector9 b = Vector9::Zero();
  const int row = trace_constraint_row(l);
  const Vector9 id = vectorize(Matrix3::Identity());
  a.row(row) = id.transpose();
  b(row) = 1.0;

  Eigen::FullPivLU<Matrix9> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw DegenerateSteadyStateError("steady_state: Liouvillian null space has dimension > 1");
  }
  Vector9 x = lu.solve(b);
  x += lu.solve(b - a * x);  // one step of iterative refinement

  const Matrix3 rho = unvectorize(x);
  return DensityMatrix3(0.5 * (rho + rho.adjoint()));
}

inline double steady_state_residual(const Liouvillian& l, const DensityMatrix3& rho) {
  return (l.matrix * vectorize(rho.matrix())).norm();
}

/// Order-resolved coherences of the 1-2 and 1-3 transitions.
struct CoherenceSet {
  Complex rho21_1;
  Complex rho31_1;
  Complex rho21_2;
  Complex rho31_2;
  /// Largest relative misfit of the epsilon fit (zero for one or two epsilons).
  double fit_residual = 0.0;
};

namespace detail {

struct OrderFit {
  Complex leading;
  Complex correction;
};

// Least-squares fit y(eps) = a + b eps^2; coherences are odd in the weak field,
// so the first correction to rho/eps is quadratic.
inline OrderFit fit_even(std::span<const double> eps, std::span<const Complex> y) {
  const std::size_t n = eps.size();
  if (n == 1) return {y[0], 0.0};
  double s0 = 0, s2 = 0, s4 = 0;
  Complex t0 = 0, t2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = eps[i] * eps[i];
    s0 += 1;
    s2 += e2;
    s4 += e2 * e2;
    t0 += y[i];
    t2 += y[i] * e2;
  }
  const double det = s0 * s4 - s2 * s2;
  return {(s4 * t0 - s2 * t2) / det, (s0 * t2 - s2 * t0) / det};
}

}  // namespace detail

/// Weak-field oracle for the perturbative coherences.
///
/// For each epsilon the full steady state is solved with the 1-2 drive scaled
/// to eps * Omega_d0 (1-3 drive off) and, separately, the 1-3 drive scaled to
/// eps * Omega_s0 (1-2 drive off). The control field is kept at full strength.
/// rho/eps is then fitted as a + b eps^2 and the intercepts are returned:
///   d-leg: rho21 -> rho21_1, rho31 -> rho31_2
///   s-leg: rho31 -> rho31_1, rho21 -> rho21_2
inline CoherenceSet extract_weak_field_orders(const DriveConfiguration& config,
                                              const RelaxationRates& rates,
                                              std::span<const double> epsilons) {
  if (epsilons.empty()) throw ContractError("extract_weak_field_orders: no epsilons given");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || epsilons[i] > 1e-2) {
      throw ContractError("extract_weak_field_orders: epsilons must lie in (0, 1e-2]");
    }
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw ContractError("extract_weak_field_orders: epsilons must be strictly decreasing");
    }
  }
  if (config.generated_td.magnitude != 0.0 || config.generated_ts.magnitude != 0.0) {
    throw ContractError("extract_weak_field_orders: generated fields must be zero");
  }

  CoherenceSet out;

  auto run_leg = [&](bool d_leg, Complex& on_12, Complex& on_13) {
    const DriveField& weak = d_leg ? config.drive_d : config.signal_s;
    if (weak.magnitude == 0.0) {
      on_12 = on_13 = 0.0;
      return;
    }
    std::vector<Complex> y12, y13;
    for (double eps : epsilons) {
      DriveConfiguration scaled = config;
      scaled.drive_d = d_leg ? DriveField{eps * weak.magnitude, weak.phase} : DriveField{};
      scaled.signal_s = d_leg ? DriveField{} : DriveField{eps * weak.magnitude, weak.phase};
      const DensityMatrix3 rho = steady_state(build_liouvillian(scaled, rates));
      y12.push_back(rho.element(2, 1) / eps);
      y13.push_back(rho.element(3, 1) / eps);
    }
    const auto fit12 = detail::fit_even(epsilons, y12);
    const auto fit13 = detail::fit_even(epsilons, y13);
    on_12 = fit12.leading;
    on_13 = fit13.leading;

    const double scale = std::max(std::abs(on_12), std::abs(on_13));
    if (scale == 0.0 || epsilons.size() < 3) return;
    double misfit = 0.0;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      const double e2 = epsilons[i] * epsilons[i];
      misfit = std::max(misfit, std::abs(y12[i] - (fit12.leading + fit12.correction * e2)));
      misfit = std::max(misfit, std::abs(y13[i] - (fit13.leading + fit13.correction * e2)));
    }
    out.fit_residual = std::max(out.fit_residual, misfit / scale);
  };

  run_leg(true, out.rho21_1, out.rho31_2);
  run_leg(false, out.rho21_2, out.rho31_1);

  if (out.fit_residual > 1e-6) {
    throw NonperturbativeError("extract_weak_field_orders: fit residual " +
                               std::to_string(out.fit_residual) +
                               " exceeds 1e-6; drives are too strong for order extraction");
  }
  return out;
}

}  // namespace deltamix
