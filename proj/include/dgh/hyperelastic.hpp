#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>

#include "dgh/errors.hpp"

namespace dgh {

enum class LawTag { SVK, NHK_C, NHK_I, NHK_CAV };
enum class Regime { Compressible, Incompressible };

std::string law_name(LawTag law);
LawTag law_from_name(const std::string& name);

struct LameParams {
  double mu = 1.0;
  double lambda = 1.0;
};

/// mu = E / (2 (1 + nu)), lambda = nu E / ((1 + nu)(1 - 2 nu)).
LameParams lame_from_young_poisson(double young, double poisson);

namespace detail {
inline double real_part(double x) { return x; }
inline double real_part(const std::complex<double>& x) { return x.real(); }
}  // namespace detail

/// Pointwise kinematic state derived from the deformation gradient:
/// J = det F, right Cauchy-Green C = F^T F, Green-Lagrange E = (C - I)/2.
template <typename S, int D>
struct Kinematics {
  using Mat = Eigen::Matrix<S, D, D>;
  Mat F;
  Mat C;
  Mat green;
  S J;

  explicit Kinematics(const Mat& defgrad) : F(defgrad) {
    C = F.transpose() * F;
    green = S(0.5) * (C - Mat::Identity());
    J = F.determinant();
  }
};

namespace detail {
// Evaluating log(J) (or C^{-1} together with log J terms) requires J > 0.
template <typename S>
void require_positive_jacobian(const S& J, const char* law) {
  if (real_part(J) <= 0.0)
    throw invalid_state_error(std::string("constitutive evaluation (") + law + ")",
                              real_part(J));
}
}  // namespace detail

/// Strain-energy density W(F).
template <typename S, int D>
S strain_energy(LawTag law, const LameParams& p, const Kinematics<S, D>& k) {
  using std::log;
  using std::pow;
  switch (law) {
    case LawTag::SVK: {
      const S trE = k.green.trace();
      return p.mu * (k.green.array() * k.green.array()).sum() + S(0.5) * p.lambda * trE * trE;
    }
    case LawTag::NHK_C: {
      detail::require_positive_jacobian(k.J, "NHK-C");
      const S lj = log(k.J);
      return S(0.5) * p.mu * (k.C.trace() - S(D)) - p.mu * lj + S(0.5) * p.lambda * lj * lj;
    }
    case LawTag::NHK_I:
      return S(0.5) * p.mu * (k.C.trace() - S(D));
    case LawTag::NHK_CAV: {
      detail::require_positive_jacobian(k.J, "NHK-CAV");
      const S lj = log(k.J);
      return S(2.0) * p.mu * pow(S(3.0), -1.25) * pow(k.C.trace(), S(0.75)) - p.mu * lj +
             S(0.5) * p.lambda * lj * lj;
    }
  }
  return S(0);
}

/// Second Piola-Kirchhoff stress S(F).
template <typename S, int D>
Eigen::Matrix<S, D, D> second_piola(LawTag law, const LameParams& p,
                                    const Kinematics<S, D>& k) {
  using Mat = Eigen::Matrix<S, D, D>;
  using std::log;
  using std::pow;
  switch (law) {
    case LawTag::SVK:
      return S(2.0) * p.mu * k.green + p.lambda * k.green.trace() * Mat::Identity();
    case LawTag::NHK_C: {
      detail::require_positive_jacobian(k.J, "NHK-C");
      const Mat Cinv = k.C.inverse();
      return p.mu * (Mat::Identity() - Cinv) + p.lambda * log(k.J) * Cinv;
    }
    case LawTag::NHK_I:
      return p.mu * Mat::Identity();
    case LawTag::NHK_CAV: {
      detail::require_positive_jacobian(k.J, "NHK-CAV");
      const Mat Cinv = k.C.inverse();
      return p.mu * pow(S(3.0), -0.25) * pow(k.C.trace(), S(-0.25)) * Mat::Identity() -
             p.mu * Cinv + p.lambda * log(k.J) * Cinv;
    }
  }
  return Mat::Zero();
}

/// First Piola-Kirchhoff stress P = F S - p J F^{-T}; p is the hydrostatic
/// pressure (zero in the compressible regime).
template <typename S, int D>
Eigen::Matrix<S, D, D> first_piola(LawTag law, const LameParams& prm,
                                   const Kinematics<S, D>& k, const S& p) {
  Eigen::Matrix<S, D, D> P = k.F * second_piola(law, prm, k);
  if (p != S(0)) {
    detail::require_positive_jacobian(k.J, "pressure term");
    P -= p * k.J * k.F.inverse().transpose();
  }
  return P;
}

/// dS/dC in component form dSdC(m,j,q,r), per the constitutive law.
template <int D>
class SecondPiolaDerivative {
public:
  SecondPiolaDerivative(LawTag law, const LameParams& p, const Kinematics<double, D>& k)
      : law_(law), p_(p) {
    switch (law_) {
      case LawTag::SVK:
        break;
      case LawTag::NHK_I:
        break;
      case LawTag::NHK_C:
        detail::require_positive_jacobian(k.J, "NHK-C");
        Cinv_ = k.C.inverse();
        logJ_ = std::log(k.J);
        break;
      case LawTag::NHK_CAV:
        detail::require_positive_jacobian(k.J, "NHK-CAV");
        Cinv_ = k.C.inverse();
        logJ_ = std::log(k.J);
        trC_ = k.C.trace();
        break;
    }
  }

  double operator()(int m, int j, int q, int r) const {
    switch (law_) {
      case LawTag::SVK:
        // dS/dE = 2 mu delta_mq delta_jr + lambda delta_mj delta_qr; dS/dC = dS/dE / 2
        return p_.mu * (m == q) * (j == r) + 0.5 * p_.lambda * (m == j) * (q == r);
      case LawTag::NHK_I:
        return 0.0;
      case LawTag::NHK_C:
        return (p_.mu - p_.lambda * logJ_) * Cinv_(m, q) * Cinv_(r, j) +
               0.5 * p_.lambda * Cinv_(q, r) * Cinv_(m, j);
      case LawTag::NHK_CAV:
        return -0.25 * p_.mu * std::pow(3.0, -0.25) * std::pow(trC_, -1.25) * (m == j) *
                   (q == r) +
               (p_.mu - p_.lambda * logJ_) * Cinv_(m, q) * Cinv_(r, j) +
               0.5 * p_.lambda * Cinv_(q, r) * Cinv_(m, j);
    }
    return 0.0;
  }

private:
  LawTag law_;
  LameParams p_;
  Eigen::Matrix<double, D, D> Cinv_ = Eigen::Matrix<double, D, D>::Zero();
  double logJ_ = 0;
  double trC_ = 0;
};

/// Fourth-order elasticity tensor A = dP/dF flattened to a d^2 x d^2 matrix
/// with row (i*D+j) and column (k*D+l):
///   A_ijkl = delta_ik S_lj + F_im dS_mj/dC_qr (delta_ql F_kr + delta_rl F_kq)
///            - p J (F^{-T}_kl F^{-T}_ij - F^{-T}_il F^{-1}_jk).
template <int D>
Eigen::Matrix<double, D * D, D * D> elasticity_tensor(LawTag law, const LameParams& prm,
                                                      const Kinematics<double, D>& kin,
                                                      double p) {
  using MatDD = Eigen::Matrix<double, D * D, D * D>;
  MatDD A = MatDD::Zero();
  const auto S = second_piola(law, prm, kin);
  const SecondPiolaDerivative<D> dSdC(law, prm, kin);
  const auto& F = kin.F;

  // FdS(i, j, q, r) = F_im dS_mj/dC_qr
  double FdS[D][D][D][D];
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int q = 0; q < D; ++q)
        for (int r = 0; r < D; ++r) {
          double acc = 0;
          for (int m = 0; m < D; ++m) acc += F(i, m) * dSdC(m, j, q, r);
          FdS[i][j][q][r] = acc;
        }

  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l) {
          double v = (i == k) ? S(l, j) : 0.0;
          for (int q = 0; q < D; ++q) v += FdS[i][j][q][l] * F(k, q);
          for (int r = 0; r < D; ++r) v += FdS[i][j][l][r] * F(k, r);
          A(i * D + j, k * D + l) = v;
        }

  if (p != 0.0) {
    detail::require_positive_jacobian(kin.J, "pressure term");
    const Eigen::Matrix<double, D, D> Finv = F.inverse();
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j)
        for (int k = 0; k < D; ++k)
          for (int l = 0; l < D; ++l)
            A(i * D + j, k * D + l) -=
                p * kin.J * (Finv(l, k) * Finv(j, i) - Finv(l, i) * Finv(j, k));
  }
  return A;
}

}  // namespace dgh
