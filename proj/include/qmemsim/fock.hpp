// Copyright 2026 The qmemsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMEMSIM_FOCK_HPP
#define QMEMSIM_FOCK_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace qmemsim {

/// Per-mode photon-number cutoff used when nothing else is requested.
inline constexpr int kDefaultNMax = 3;

/// Cutoff weight above which reports should warn about truncation.
inline constexpr double kOverflowWarning = 1e-6;

/// Density operator over a tensor product of optical or atomic modes,
/// truncated at n_max photons per mode.
///
/// Basis ordering is row-major in the occupation numbers: mode 0 is the most
/// significant digit, so |n_0, n_1, ...> sits at index
/// sum_k n_k (n_max+1)^(M-1-k). Pure states are stored as density operators.
///
/// Every operation that may have pushed weight past the cutoff accumulates it
/// in overflow(); this is a diagnostic, never an error.
template <typename Scalar>
class BasicMultiModeState {
 public:
  using Real = Scalar;
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  /// Vacuum on all modes.
  BasicMultiModeState(int mode_count, int n_max)
      : mode_count_(mode_count), n_max_(n_max) {
    check_shape(mode_count, n_max);
    rho_ = Matrix::Zero(dim(), dim());
    rho_(0, 0) = Complex(1);
  }

  BasicMultiModeState(int mode_count, int n_max, Matrix rho, Real overflow = Real(0))
      : mode_count_(mode_count), n_max_(n_max), rho_(std::move(rho)), overflow_(overflow) {
    check_shape(mode_count, n_max);
    if (rho_.rows() != dim() || rho_.cols() != dim()) {
      throw std::invalid_argument("density matrix dimension does not match mode_count/n_max");
    }
  }

  /// Normalized projector onto `ket`.
  static BasicMultiModeState pure(int mode_count, int n_max, const Vector& ket) {
    const Real norm = ket.norm();
    if (!(norm > Real(0))) throw std::invalid_argument("zero ket");
    const Vector psi = ket / norm;
    return BasicMultiModeState(mode_count, n_max, psi * psi.adjoint());
  }

  /// Number state |n_0, n_1, ...>.
  static BasicMultiModeState fock(int n_max, std::span<const int> occupations) {
    const int modes = static_cast<int>(occupations.size());
    BasicMultiModeState s(modes, n_max);
    s.rho_.setZero();
    const Eigen::Index i = s.index_of(occupations);
    s.rho_(i, i) = Complex(1);
    return s;
  }
  static BasicMultiModeState fock(int n_max, std::initializer_list<int> occupations) {
    return fock(n_max, std::span<const int>(occupations.begin(), occupations.size()));
  }

  int mode_count() const { return mode_count_; }
  int n_max() const { return n_max_; }
  int levels() const { return n_max_ + 1; }
  Eigen::Index dim() const {
    Eigen::Index d = 1;
    for (int k = 0; k < mode_count_; ++k) d *= levels();
    return d;
  }
  const Matrix& matrix() const { return rho_; }
  Real overflow() const { return overflow_; }
  bool overflow_warning() const { return overflow_ > Real(kOverflowWarning); }

  Real trace() const { return rho_.trace().real(); }

  Eigen::Index index_of(std::span<const int> occupations) const {
    if (static_cast<int>(occupations.size()) != mode_count_) {
      throw std::invalid_argument("occupation list length differs from mode_count");
    }
    Eigen::Index idx = 0;
    for (int n : occupations) {
      if (n < 0 || n > n_max_) throw std::out_of_range("occupation outside [0, n_max]");
      idx = idx * levels() + n;
    }
    return idx;
  }
  Eigen::Index index_of(std::initializer_list<int> occupations) const {
    return index_of(std::span<const int>(occupations.begin(), occupations.size()));
  }

  /// Occupation number of `mode` in basis element `index`.
  int occupation(Eigen::Index index, int mode) const {
    for (int k = mode_count_ - 1; k > mode; --k) index /= levels();
    return static_cast<int>(index % levels());
  }

  /// Diagonal element <n|rho|n>.
  Real probability(std::initializer_list<int> occupations) const {
    const Eigen::Index i = index_of(occupations);
    return rho_(i, i).real();
  }

  /// Weight on basis states with any mode at the cutoff level.
  Real cutoff_weight() const {
    Real w(0);
    for (Eigen::Index i = 0; i < dim(); ++i) {
      for (int k = 0; k < mode_count_; ++k) {
        if (occupation(i, k) == n_max_) {
          w += rho_(i, i).real();
          break;
        }
      }
    }
    return w;
  }

 private:
  static void check_shape(int mode_count, int n_max) {
    if (mode_count < 1) throw std::invalid_argument("mode_count must be >= 1");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  }

  int mode_count_;
  int n_max_;
  Matrix rho_;
  Real overflow_ = Real(0);
};

using MultiModeState = BasicMultiModeState<double>;

/// Bucket (click / no-click) detector. Clicks with probability
/// 1 - (1 - dark_prob) (1 - efficiency)^n on an n-photon input.
struct ClickDetector {
  double efficiency = 1.0;
  double dark_prob = 0.0;

  void validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
      throw std::invalid_argument("detector efficiency outside [0,1]");
    }
    if (!(dark_prob >= 0.0 && dark_prob <= 1.0)) {
      throw std::invalid_argument("detector dark_prob outside [0,1]");
    }
  }
};

// Channels acting on a single mode (BeamSplitter couples the mode to `partner`).
struct Loss {
  double transmission = 1.0;
};
struct PhaseShift {
  double phi = 0.0;
};
struct BeamSplitter {
  int partner = 1;
  double transmittance = 0.5;
  double phase = 0.0;
};
/// Phase-randomized coherent admixture with the given mean photon number.
struct BackgroundInjection {
  double mean_photons = 0.0;
};
/// Gaussian phase jitter that scales the |n><n+1| coherences by `visibility`.
struct Dephasing {
  double visibility = 1.0;
};

using Channel = std::variant<Loss, PhaseShift, BeamSplitter, BackgroundInjection, Dephasing>;
using ChannelChain = std::vector<Channel>;

namespace detail {

template <typename Scalar>
using CMatrix = typename BasicMultiModeState<Scalar>::Matrix;

template <typename Scalar>
void check_mode(const BasicMultiModeState<Scalar>& s, int mode) {
  if (mode < 0 || mode >= s.mode_count()) {
    throw std::out_of_range("mode index " + std::to_string(mode) + " out of range");
  }
}

inline void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0,1]");
}

template <typename Scalar>
CMatrix<Scalar> annihilation(int levels) {
  CMatrix<Scalar> a = CMatrix<Scalar>::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(Scalar(n));
  return a;
}

template <typename Scalar>
CMatrix<Scalar> identity(Eigen::Index d) {
  return CMatrix<Scalar>::Identity(d, d);
}

/// Embed a single-mode operator acting on `mode` into the full space.
template <typename Scalar>
CMatrix<Scalar> embed(const BasicMultiModeState<Scalar>& s, int mode, const CMatrix<Scalar>& op) {
  Eigen::Index left = 1;
  Eigen::Index right = 1;
  for (int k = 0; k < mode; ++k) left *= s.levels();
  for (int k = mode + 1; k < s.mode_count(); ++k) right *= s.levels();
  CMatrix<Scalar> tmp = Eigen::kroneckerProduct(identity<Scalar>(left), op).eval();
  return Eigen::kroneckerProduct(tmp, identity<Scalar>(right)).eval();
}

/// exp(-i t H) for Hermitian H.
template <typename Scalar>
CMatrix<Scalar> unitary_from_hermitian(const CMatrix<Scalar>& h, Scalar t) {
  using Complex = std::complex<Scalar>;
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(h);
  const auto& lambda = es.eigenvalues();
  Eigen::Matrix<Complex, Eigen::Dynamic, 1> phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases(k) = std::polar(Scalar(1), -t * lambda(k));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename Scalar>
BasicMultiModeState<Scalar> with_matrix(const BasicMultiModeState<Scalar>& s,
                                        CMatrix<Scalar> rho, Scalar extra_overflow = Scalar(0)) {
  return BasicMultiModeState<Scalar>(s.mode_count(), s.n_max(), std::move(rho),
                                     s.overflow() + extra_overflow);
}

template <typename Scalar>
Scalar binomial(int n, int k) {
  Scalar r(1);
  for (int i = 1; i <= k; ++i) r = r * Scalar(n - k + i) / Scalar(i);
  return r;
}

}  // namespace detail

/// Two-mode mixing exp(theta (e^{i phase} a^dag b - e^{-i phase} a b^dag)) with
/// cos^2(theta) = transmittance. Exact on total photon number <= n_max in the
/// pair; input weight above that is added to overflow().
template <typename Scalar>
BasicMultiModeState<Scalar> apply_beamsplitter(const BasicMultiModeState<Scalar>& s, int mode_a,
                                               int mode_b, double transmittance, double phase) {
  using Complex = std::complex<Scalar>;
  detail::check_mode(s, mode_a);
  detail::check_mode(s, mode_b);
  if (mode_a == mode_b) throw std::invalid_argument("beamsplitter modes must be distinct");
  detail::check_probability(transmittance, "transmittance");

  const auto a = detail::embed(s, mode_a, detail::annihilation<Scalar>(s.levels()));
  const auto b = detail::embed(s, mode_b, detail::annihilation<Scalar>(s.levels()));
  const Complex e = std::polar(Scalar(1), Scalar(phase));
  // H = i G with G = e a^dag b - e^* a b^dag, so U = exp(theta G) = exp(-i theta H).
  const detail::CMatrix<Scalar> h =
      Complex(0, 1) * (e * a.adjoint() * b - std::conj(e) * a * b.adjoint());
  const Scalar theta = std::acos(std::sqrt(Scalar(transmittance)));
  const auto u = detail::unitary_from_hermitian<Scalar>(h, theta);

  Scalar above(0);
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    if (s.occupation(i, mode_a) + s.occupation(i, mode_b) > s.n_max()) {
      above += s.matrix()(i, i).real();
    }
  }
  return detail::with_matrix<Scalar>(s, u * s.matrix() * u.adjoint(), above);
}

/// Beamsplitter-to-vacuum loss: each photon survives with `transmission`.
template <typename Scalar>
BasicMultiModeState<Scalar> apply_loss(const BasicMultiModeState<Scalar>& s, int mode,
                                       double transmission) {
  detail::check_mode(s, mode);
  detail::check_probability(transmission, "transmission");
  if (transmission == 1.0) return s;
  const int levels = s.levels();
  const Scalar t(transmission);
  detail::CMatrix<Scalar> out = detail::CMatrix<Scalar>::Zero(s.dim(), s.dim());
  for (int m = 0; m < levels; ++m) {
    detail::CMatrix<Scalar> k = detail::CMatrix<Scalar>::Zero(levels, levels);
    bool any = false;
    for (int n = m; n < levels; ++n) {
      const Scalar amp2 = detail::binomial<Scalar>(n, m) * std::pow(t, Scalar(n - m)) *
                          std::pow(Scalar(1) - t, Scalar(m));
      if (amp2 > Scalar(0)) {
        k(n - m, n) = std::sqrt(amp2);
        any = true;
      }
    }
    if (!any) continue;
    const auto kf = detail::embed(s, mode, k);
    out.noalias() += kf * s.matrix() * kf.adjoint();
  }
  return detail::with_matrix<Scalar>(s, std::move(out));
}

/// Diagonal unitary exp(i phi n) on one mode.
template <typename Scalar>
BasicMultiModeState<Scalar> apply_phase(const BasicMultiModeState<Scalar>& s, int mode,
                                        double phi) {
  detail::check_mode(s, mode);
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> d(s.dim());
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    d(i) = std::polar(Scalar(1), Scalar(phi) * Scalar(s.occupation(i, mode)));
  }
  return detail::with_matrix<Scalar>(s, d.asDiagonal() * s.matrix() * d.conjugate().asDiagonal());
}

/// Gaussian phase-noise average: rho_{n,m} -> visibility^{(n-m)^2} rho_{n,m}.
template <typename Scalar>
BasicMultiModeState<Scalar> apply_dephasing(const BasicMultiModeState<Scalar>& s, int mode,
                                            double visibility) {
  detail::check_mode(s, mode);
  detail::check_probability(visibility, "visibility");
  detail::CMatrix<Scalar> out = s.matrix();
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    for (Eigen::Index j = 0; j < s.dim(); ++j) {
      const int dn = s.occupation(i, mode) - s.occupation(j, mode);
      if (dn != 0) out(i, j) *= std::pow(Scalar(visibility), Scalar(dn * dn));
    }
  }
  return detail::with_matrix<Scalar>(s, std::move(out));
}

/// Phase-averaged displacement: mixes in Poissonian light of mean `mean_photons`
/// that carries no phase relation to the mode content. The phase average uses
/// 4 n_max + 1 equally spaced phases, which is exact in the truncated space.
template <typename Scalar>
BasicMultiModeState<Scalar> apply_background(const BasicMultiModeState<Scalar>& s, int mode,
                                             double mean_photons) {
  using Complex = std::complex<Scalar>;
  detail::check_mode(s, mode);
  if (!(mean_photons >= 0.0)) throw std::invalid_argument("background mean must be >= 0");
  if (mean_photons == 0.0) return s;
  const int points = 4 * s.n_max() + 1;
  const auto a = detail::annihilation<Scalar>(s.levels());
  const Scalar amp = std::sqrt(Scalar(mean_photons));
  detail::CMatrix<Scalar> out = detail::CMatrix<Scalar>::Zero(s.dim(), s.dim());
  for (int k = 0; k < points; ++k) {
    const Complex alpha =
        std::polar(amp, Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(points));
    // D(alpha) = exp(alpha a^dag - alpha^* a) = exp(-i H), H = i (alpha a^dag - alpha^* a).
    const detail::CMatrix<Scalar> h = Complex(0, 1) * (alpha * a.adjoint() - std::conj(alpha) * a);
    const auto u = detail::embed(s, mode, detail::unitary_from_hermitian<Scalar>(h, Scalar(1)));
    out.noalias() += u * s.matrix() * u.adjoint();
  }
  out /= Scalar(points);
  // Weight pushed onto the cutoff level is the truncation error of the displacement.
  const auto shifted = detail::with_matrix<Scalar>(s, out);
  const Scalar grown = std::max(Scalar(0), shifted.cutoff_weight() - s.cutoff_weight());
  return detail::with_matrix<Scalar>(s, std::move(out), grown);
}

template <typename Scalar>
BasicMultiModeState<Scalar> apply(const BasicMultiModeState<Scalar>& s, int mode,
                                  const Channel& channel) {
  return std::visit(
      [&](const auto& c) -> BasicMultiModeState<Scalar> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Loss>) {
          return apply_loss(s, mode, c.transmission);
        } else if constexpr (std::is_same_v<T, PhaseShift>) {
          return apply_phase(s, mode, c.phi);
        } else if constexpr (std::is_same_v<T, BeamSplitter>) {
          return apply_beamsplitter(s, mode, c.partner, c.transmittance, c.phase);
        } else if constexpr (std::is_same_v<T, BackgroundInjection>) {
          return apply_background(s, mode, c.mean_photons);
        } else {
          return apply_dephasing(s, mode, c.visibility);
        }
      },
      channel);
}

template <typename Scalar>
BasicMultiModeState<Scalar> apply(const BasicMultiModeState<Scalar>& s, int mode,
                                  const ChannelChain& chain) {
  BasicMultiModeState<Scalar> out = s;
  for (const auto& c : chain) out = apply(out, mode, c);
  return out;
}

/// Marginal photon-number distribution of one mode.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> photon_number_probs(const BasicMultiModeState<Scalar>& s,
                                                             int mode) {
  detail::check_mode(s, mode);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(s.levels());
  for (Eigen::Index i = 0; i < s.dim(); ++i) p(s.occupation(i, mode)) += s.matrix()(i, i).real();
  return p;
}

template <typename Scalar>
Scalar mean_photon_number(const BasicMultiModeState<Scalar>& s, int mode) {
  const auto p = photon_number_probs(s, mode);
  Scalar m(0);
  for (Eigen::Index n = 0; n < p.size(); ++n) m += Scalar(n) * p(n);
  return m;
}

/// No-click POVM element (diagonal) of a detector on a `levels`-dimensional mode.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> no_click_weights(int levels, const ClickDetector& det) {
  det.validate();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w(levels);
  for (int n = 0; n < levels; ++n) {
    w(n) = Scalar(1.0 - det.dark_prob) * std::pow(Scalar(1.0 - det.efficiency), Scalar(n));
  }
  return w;
}

template <typename Scalar>
struct BasicClickOutcome {
  Scalar p_click;
  // Lueders-updated states; absent when the corresponding outcome has zero probability.
  std::optional<BasicMultiModeState<Scalar>> post_click;
  std::optional<BasicMultiModeState<Scalar>> post_noclick;
};
using ClickOutcome = BasicClickOutcome<double>;

template <typename Scalar>
BasicClickOutcome<Scalar> click_probabilities(const BasicMultiModeState<Scalar>& s, int mode,
                                              const ClickDetector& det) {
  detail::check_mode(s, mode);
  const auto w0 = no_click_weights<Scalar>(s.levels(), det);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sqrt0(s.dim()), sqrt1(s.dim());
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    const Scalar w = w0(s.occupation(i, mode));
    sqrt0(i) = std::sqrt(w);
    sqrt1(i) = std::sqrt(std::max(Scalar(0), Scalar(1) - w));
  }
  detail::CMatrix<Scalar> r0 = sqrt0.asDiagonal() * s.matrix() * sqrt0.asDiagonal();
  detail::CMatrix<Scalar> r1 = sqrt1.asDiagonal() * s.matrix() * sqrt1.asDiagonal();
  const Scalar p0 = r0.trace().real();
  const Scalar p1 = r1.trace().real();
  BasicClickOutcome<Scalar> out{p1 / (p0 + p1), std::nullopt, std::nullopt};
  if (p1 > Scalar(0)) out.post_click = detail::with_matrix<Scalar>(s, r1 / p1);
  if (p0 > Scalar(0)) out.post_noclick = detail::with_matrix<Scalar>(s, r0 / p0);
  return out;
}

/// Joint click-pattern distribution for detectors on `modes`. Entry `mask` has
/// bit k set when the detector on modes[k] clicked.
template <typename Scalar>
std::vector<Scalar> click_pattern_probabilities(const BasicMultiModeState<Scalar>& s,
                                                std::span<const int> modes,
                                                std::span<const ClickDetector> dets) {
  if (modes.size() != dets.size()) throw std::invalid_argument("one detector per mode required");
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> w0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    detail::check_mode(s, modes[k]);
    w0.push_back(no_click_weights<Scalar>(s.levels(), dets[k]));
  }
  std::vector<Scalar> p(std::size_t{1} << modes.size(), Scalar(0));
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    const Scalar rho_ii = s.matrix()(i, i).real();
    if (rho_ii == Scalar(0)) continue;
    for (std::size_t mask = 0; mask < p.size(); ++mask) {
      Scalar f = rho_ii;
      for (std::size_t k = 0; k < modes.size(); ++k) {
        const Scalar none = w0[k](s.occupation(i, modes[k]));
        f *= (mask >> k) & 1U ? Scalar(1) - none : none;
      }
      p[mask] += f;
    }
  }
  return p;
}

/// Trace out one mode.
template <typename Scalar>
BasicMultiModeState<Scalar> partial_trace(const BasicMultiModeState<Scalar>& s, int mode) {
  detail::check_mode(s, mode);
  if (s.mode_count() == 1) throw std::invalid_argument("cannot trace out the only mode");
  const int L = s.levels();
  Eigen::Index right = 1;
  for (int k = mode + 1; k < s.mode_count(); ++k) right *= L;
  const Eigen::Index left = s.dim() / (right * L);
  const Eigen::Index d = left * right;
  detail::CMatrix<Scalar> out = detail::CMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index l1 = 0; l1 < left; ++l1)
    for (Eigen::Index r1 = 0; r1 < right; ++r1)
      for (Eigen::Index l2 = 0; l2 < left; ++l2)
        for (Eigen::Index r2 = 0; r2 < right; ++r2) {
          std::complex<Scalar> acc(0);
          for (int n = 0; n < L; ++n) {
            acc += s.matrix()((l1 * L + n) * right + r1, (l2 * L + n) * right + r2);
          }
          out(l1 * right + r1, l2 * right + r2) = acc;
        }
  return BasicMultiModeState<Scalar>(s.mode_count() - 1, s.n_max(), std::move(out), s.overflow());
}

/// rho_a (x) rho_b, with a's modes first. Cutoffs must agree.
template <typename Scalar>
BasicMultiModeState<Scalar> tensor(const BasicMultiModeState<Scalar>& a,
                                   const BasicMultiModeState<Scalar>& b) {
  if (a.n_max() != b.n_max()) throw std::invalid_argument("tensor requires equal n_max");
  return BasicMultiModeState<Scalar>(a.mode_count() + b.mode_count(), a.n_max(),
                                     Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval(),
                                     a.overflow() + b.overflow());
}

template <typename Scalar>
Scalar min_eigenvalue(const BasicMultiModeState<Scalar>& s) {
  const detail::CMatrix<Scalar> h = (s.matrix() + s.matrix().adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<detail::CMatrix<Scalar>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Trace one, Hermitian and positive semidefinite, all within `tol`.
template <typename Scalar>
bool is_physical(const BasicMultiModeState<Scalar>& s, double tol = 1e-9) {
  if (std::abs(s.trace() - Scalar(1)) > Scalar(tol)) return false;
  if ((s.matrix() - s.matrix().adjoint()).cwiseAbs().maxCoeff() > Scalar(tol)) return false;
  return min_eigenvalue(s) >= -Scalar(tol);
}

}  // namespace qmemsim

#endif  // QMEMSIM_FOCK_HPP
