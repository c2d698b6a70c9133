#pragma once
// Truncated Fock-space reference model of the middle-station measurement,
// built from elementary mode operations only.  Validation code: nothing in
// the production rate path uses it.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "mapm/optics.hpp"

namespace mapm {
namespace fock {

constexpr int kCut = 40;  // photon-number truncation per mode
constexpr int kDim = kCut + 1;

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Coherent state by its number-basis series.
inline Vec coherent_vector(complexd beta) {
  Vec v(kDim);
  complexd amp = std::exp(-0.5 * std::norm(beta));
  for (int n = 0; n < kDim; ++n) {
    v[n] = amp;
    amp *= beta / std::sqrt(double(n + 1));
  }
  return v;
}

// Unitary of exp(t (a^dag b - a b^dag)) restricted to the block of total
// photon number N, built by exponentiating the generator.
inline Eigen::MatrixXd bs_block_unitary(int N, double t) {
  const int lo = std::max(0, N - kCut);
  const int hi = std::min(N, kCut);
  const int dim = hi - lo + 1;
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(dim, dim);
  for (int r = 0; r + 1 < dim; ++r) {
    const int k = lo + r;  // photons in mode a
    gen(r + 1, r) = std::sqrt(double(k + 1) * double(N - k));
    gen(r, r + 1) = -gen(r + 1, r);
  }
  // gen is antisymmetric; i*gen is Hermitian, so exponentiate by eigendecomposition.
  Eigen::MatrixXcd herm = complexd(0.0, 1.0) * gen.cast<complexd>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  Eigen::VectorXcd phases(dim);
  for (int r = 0; r < dim; ++r) phases[r] = std::exp(complexd(0.0, -t * es.eigenvalues()[r]));
  Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return u.real();
}

// Applies the two-mode beam splitter to a joint state psi[n_a][n_b],
// block by block over the conserved total photon number.
inline Mat two_mode_bs(const Mat& psi, double t) {
  if (psi.rows() != kDim || psi.cols() != kDim)
    throw std::invalid_argument("two_mode_bs: unexpected state dimensions");
  Mat out = Mat::Zero(kDim, kDim);
  for (int N = 0; N <= 2 * kCut; ++N) {
    const int lo = std::max(0, N - kCut);
    const int hi = std::min(N, kCut);
    const int dim = hi - lo + 1;
    Eigen::VectorXcd block(dim);
    for (int r = 0; r < dim; ++r) block[r] = psi(lo + r, N - lo - r);
    Eigen::VectorXcd mixed = bs_block_unitary(N, t).cast<complexd>() * block;
    for (int r = 0; r < dim; ++r) out(lo + r, N - lo - r) = mixed[r];
  }
  return out;
}

// Sends a single-mode state through a loss channel modeled as a beam
// splitter onto a vacuum ancilla, and factors the joint output back into a
// product of system and environment vectors.  Throws if the output is
// entangled beyond numerical noise, which cannot happen for coherent inputs.
inline std::pair<Vec, Vec> loss_split(const Vec& in, double amp_transmission) {
  if (!(amp_transmission >= 0.0) || amp_transmission > 1.0)
    throw std::invalid_argument("loss_split: transmission amplitude outside [0, 1]");
  Mat joint = Mat::Zero(kDim, kDim);
  joint.col(0) = in;  // vacuum ancilla
  const double t = std::acos(std::min(1.0, amp_transmission));
  const Mat mixed = two_mode_bs(joint, t);
  Eigen::JacobiSVD<Mat> svd(mixed, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues().size() > 1 && svd.singularValues()[1] > 1e-12)
    throw std::runtime_error("loss_split: output is not a product state");
  Vec sys = svd.matrixU().col(0) * svd.singularValues()[0];
  Vec env = svd.matrixV().col(0).conjugate();
  return {sys, env};
}

// One arm of the station: the source amplitude leaving the memory and the
// amplitude transmission on the way to the beam splitter.
struct FockArm {
  double source_amp = 0.0;
  double amp_transmission = 1.0;
};

namespace detail {

// Diagonal POVM weight of the heralding element in the photon-number basis
// of the difference port.
inline double povm_weight(HeraldPovm povm, double d0, int n) {
  switch (povm) {
    case HeraldPovm::onoff_click:
      return n == 0 ? 1.0 - d0 : 1.0;
    case HeraldPovm::pnrd_even:
      return (n >= 2 && n % 2 == 0) ? 1.0 : 0.0;
    case HeraldPovm::pnrd_odd:
      return (n % 2 == 1) ? 1.0 : 0.0;
  }
  throw std::logic_error("povm_weight: unknown variant");
}

}  // namespace detail

// Branch table of the station measurement computed numerically: per spin
// branch, coherent light is sent through the loss channel, interfered on the
// balanced beam splitter, and contracted with the POVM on the difference
// port while tracing the sum port and both environments.
inline Eigen::Matrix4cd herald_table_fock(FockArm arm_a, FockArm arm_b, double theta,
                                          double dark_noclick_vacuum, double phase_mismatch,
                                          HeraldPovm povm) {
  const complexd i{0.0, 1.0};
  const complexd up = std::exp(-i * theta), dn = std::exp(i * theta);
  const complexd mis = std::exp(i * phase_mismatch);
  const complexd spin_a[4] = {up, dn, up, dn};
  const complexd spin_b[4] = {up, dn, dn, up};

  Vec sys_a[4], env_a[4], sys_b[4], env_b[4];
  for (int k = 0; k < 4; ++k) {
    std::tie(sys_a[k], env_a[k]) =
        loss_split(coherent_vector(arm_a.source_amp * spin_a[k]), arm_a.amp_transmission);
    std::tie(sys_b[k], env_b[k]) =
        loss_split(coherent_vector(arm_b.source_amp * spin_b[k] * mis), arm_b.amp_transmission);
  }

  // Joint surviving light after the balanced beam splitter, per branch.
  Mat port[4];
  for (int k = 0; k < 4; ++k) {
    Mat joint = sys_a[k] * sys_b[k].transpose();
    port[k] = two_mode_bs(joint, 0.78539816339744831);  // pi/4
  }

  Eigen::Matrix4cd m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      // Sum port (first output) traced, POVM on the difference port.
      complexd acc{0.0, 0.0};
      for (int ns = 0; ns < kDim; ++ns)
        for (int nd = 0; nd < kDim; ++nd)
          acc += std::conj(port[c](ns, nd)) * port[r](ns, nd) *
                 detail::povm_weight(povm, dark_noclick_vacuum, nd);
      const complexd env_overlap =
          env_a[c].dot(env_a[r]) * env_b[c].dot(env_b[r]);
      m(r, c) = acc * env_overlap;
    }
  }
  return m;
}

}  // namespace fock
}  // namespace mapm
