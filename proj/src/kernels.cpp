#include "nematic/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nematic/fields.hpp"

namespace nematic::kernels {
namespace {

using Index = std::ptrdiff_t;

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

inline void bulk_at(double p, double q, double a, double c, double& op, double& oq) {
  const double r = p * p + q * q;
  const double f = -a - 2.0 * c * r;
  op = f * p;
  oq = f * q;
}

inline void linearized_bulk_at(double p, double q, double xp, double xq, double a, double c,
                               double& op, double& oq) {
  const double tr_q2 = 2.0 * (p * p + q * q);
  const double tr_qx = 2.0 * (p * xp + q * xq);
  op = -a * xp - c * (tr_q2 * xp + 2.0 * tr_qx * p);
  oq = -a * xq - c * (tr_q2 * xq + 2.0 * tr_qx * q);
}

inline double stretching_at(double g11, double g12, double g21, double g22, double p, double q,
                            double xi, double& op, double& oq) {
  const Mat2 grad{{{{g11, g12}, {g21, g22}}}};
  const Mat2 gt = grad.transpose();
  const Mat2 D = 0.5 * (grad + gt);
  const Mat2 W = 0.5 * (grad - gt);
  const Mat2 Qm = q_matrix(p, q);
  const Mat2 Qh = Qm + 0.5 * Mat2::identity();
  const double tr_q_grad = (Qm * grad).trace();
  const Mat2 S = (xi * D + W) * Qh + Qh * (xi * D - W) - (2.0 * xi * tr_q_grad) * Qh;
  op = 0.5 * (S(0, 0) - S(1, 1));
  oq = 0.5 * (S(0, 1) + S(1, 0));
  return std::max(std::abs(S(0, 1) - S(1, 0)), std::abs(S.trace()));
}

inline void tau_at(double p, double q, double hp, double hq, double dp1, double dp2, double dq1,
                   double dq2, double xi, double L, double sign, double& t11, double& t12,
                   double& t21, double& t22) {
  const Mat2 Qm = q_matrix(p, q);
  const Mat2 Hm = q_matrix(hp, hq);
  const Mat2 Qh = Qm + 0.5 * Mat2::identity();
  const double tr_qh = frobenius(Qm, Hm);
  // (grad Q (.) grad Q)_ij = sum_kl d_i Q_kl d_j Q_kl = 2 (d_i p d_j p + d_i q d_j q)
  const double dp[2] = {dp1, dp2};
  const double dq[2] = {dq1, dq2};
  Mat2 G;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) G(i, j) = 2.0 * (dp[i] * dp[j] + dq[i] * dq[j]);
  const Mat2 tau = (-xi) * (Qh * Hm + Hm * Qh) + (2.0 * xi * tr_qh) * Qh - L * G;
  t11 = sign * tau(0, 0);
  t12 = sign * tau(0, 1);
  t21 = sign * tau(1, 0);
  t22 = sign * tau(1, 1);
}

inline void sigma_at(double p, double q, double hp, double hq, double& s11, double& s12,
                     double& s21, double& s22) {
  const Mat2 Qm = q_matrix(p, q);
  const Mat2 Hm = q_matrix(hp, hq);
  const Mat2 s = Qm * Hm - Hm * Qm;
  s11 = s(0, 0);
  s12 = s(0, 1);
  s21 = s(1, 0);
  s22 = s(1, 1);
}

inline int wavenumber(int index, int n) { return index <= n / 2 ? index : index - n; }

inline void helmholtz_row(std::complex<double>* row, int r, int n, double alpha) {
  const int k1 = wavenumber(r, n);
  const int cols = n / 2 + 1;
  for (int c = 0; c < cols; ++c) {
    const double k2sq = static_cast<double>(k1) * k1 + static_cast<double>(c) * c;
    row[c] /= 1.0 + alpha * kFourPiSq * k2sq;
  }
}

inline void leray_row(std::complex<double>* a, std::complex<double>* b, int r, int n) {
  const int k1 = wavenumber(r, n);
  const int cols = n / 2 + 1;
  for (int c = 0; c < cols; ++c) {
    const double ksq = static_cast<double>(k1) * k1 + static_cast<double>(c) * c;
    if (ksq == 0.0) {
      a[c] = 0.0;
      b[c] = 0.0;
      continue;
    }
    const std::complex<double> dot = static_cast<double>(k1) * a[c] + static_cast<double>(c) * b[c];
    a[c] -= static_cast<double>(k1) * dot / ksq;
    b[c] -= static_cast<double>(c) * dot / ksq;
  }
}

inline bool use_threads(std::size_t n) { return n >= kParallelThreshold; }

}  // namespace

void set_num_threads(int threads) { omp_set_num_threads(std::max(1, threads)); }
int max_threads() { return omp_get_max_threads(); }

void bulk_field(CRSpan p, CRSpan q, double a, double c, RSpan outp, RSpan outq) {
  const Index n = static_cast<Index>(p.size());
#pragma omp parallel for schedule(static) if (use_threads(p.size()))
  for (Index k = 0; k < n; ++k) bulk_at(p[k], q[k], a, c, outp[k], outq[k]);
}

void linearized_bulk(CRSpan p, CRSpan q, CRSpan xp, CRSpan xq, double a, double c, RSpan outp,
                     RSpan outq) {
  const Index n = static_cast<Index>(p.size());
#pragma omp parallel for schedule(static) if (use_threads(p.size()))
  for (Index k = 0; k < n; ++k) linearized_bulk_at(p[k], q[k], xp[k], xq[k], a, c, outp[k], outq[k]);
}

double stretching(const GradU& g, CRSpan p, CRSpan q, double xi, RSpan outp, RSpan outq) {
  const Index n = static_cast<Index>(p.size());
  double defect = 0.0;
#pragma omp parallel for schedule(static) reduction(max : defect) if (use_threads(p.size()))
  for (Index k = 0; k < n; ++k) {
    defect = std::max(defect, stretching_at(g.g11[k], g.g12[k], g.g21[k], g.g22[k], p[k], q[k], xi,
                                            outp[k], outq[k]));
  }
  return defect;
}

void stress_tau(CRSpan p, CRSpan q, CRSpan hp, CRSpan hq, const GradQ& dq, double xi, double L,
                double sign, const TensorOut& out) {
  const Index n = static_cast<Index>(p.size());
#pragma omp parallel for schedule(static) if (use_threads(p.size()))
  for (Index k = 0; k < n; ++k) {
    tau_at(p[k], q[k], hp[k], hq[k], dq.dp1[k], dq.dp2[k], dq.dq1[k], dq.dq2[k], xi, L, sign,
           out.t11[k], out.t12[k], out.t21[k], out.t22[k]);
  }
}

void stress_sigma(CRSpan p, CRSpan q, CRSpan hp, CRSpan hq, const TensorOut& out) {
  const Index n = static_cast<Index>(p.size());
#pragma omp parallel for schedule(static) if (use_threads(p.size()))
  for (Index k = 0; k < n; ++k) {
    sigma_at(p[k], q[k], hp[k], hq[k], out.t11[k], out.t12[k], out.t21[k], out.t22[k]);
  }
}

void advect(CRSpan u1, CRSpan u2, CRSpan f1, CRSpan f2, RSpan out) {
  const Index n = static_cast<Index>(u1.size());
#pragma omp parallel for schedule(static) if (use_threads(u1.size()))
  for (Index k = 0; k < n; ++k) out[k] = u1[k] * f1[k] + u2[k] * f2[k];
}

void axpy(double s, CRSpan x, RSpan y) {
  const Index n = static_cast<Index>(x.size());
#pragma omp parallel for schedule(static) if (use_threads(x.size()))
  for (Index k = 0; k < n; ++k) y[k] += s * x[k];
}

void helmholtz_divide(CSpan f, int n, double alpha) {
  const int cols = n / 2 + 1;
#pragma omp parallel for schedule(static) if (use_threads(f.size()))
  for (int r = 0; r < n; ++r) helmholtz_row(f.data() + static_cast<std::size_t>(r) * cols, r, n, alpha);
}

void leray(CSpan u1, CSpan u2, int n) {
  const int cols = n / 2 + 1;
#pragma omp parallel for schedule(static) if (use_threads(u1.size()))
  for (int r = 0; r < n; ++r) {
    const std::size_t off = static_cast<std::size_t>(r) * cols;
    leray_row(u1.data() + off, u2.data() + off, r, n);
  }
}

namespace ref {

void bulk_field(CRSpan p, CRSpan q, double a, double c, RSpan outp, RSpan outq) {
  for (std::size_t k = 0; k < p.size(); ++k) bulk_at(p[k], q[k], a, c, outp[k], outq[k]);
}

void linearized_bulk(CRSpan p, CRSpan q, CRSpan xp, CRSpan xq, double a, double c, RSpan outp,
                     RSpan outq) {
  for (std::size_t k = 0; k < p.size(); ++k)
    linearized_bulk_at(p[k], q[k], xp[k], xq[k], a, c, outp[k], outq[k]);
}

double stretching(const GradU& g, CRSpan p, CRSpan q, double xi, RSpan outp, RSpan outq) {
  double defect = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    defect = std::max(defect, stretching_at(g.g11[k], g.g12[k], g.g21[k], g.g22[k], p[k], q[k], xi,
                                            outp[k], outq[k]));
  }
  return defect;
}

void stress_tau(CRSpan p, CRSpan q, CRSpan hp, CRSpan hq, const GradQ& dq, double xi, double L,
                double sign, const TensorOut& out) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    tau_at(p[k], q[k], hp[k], hq[k], dq.dp1[k], dq.dp2[k], dq.dq1[k], dq.dq2[k], xi, L, sign,
           out.t11[k], out.t12[k], out.t21[k], out.t22[k]);
  }
}

void stress_sigma(CRSpan p, CRSpan q, CRSpan hp, CRSpan hq, const TensorOut& out) {
  for (std::size_t k = 0; k < p.size(); ++k)
    sigma_at(p[k], q[k], hp[k], hq[k], out.t11[k], out.t12[k], out.t21[k], out.t22[k]);
}

void advect(CRSpan u1, CRSpan u2, CRSpan f1, CRSpan f2, RSpan out) {
  for (std::size_t k = 0; k < u1.size(); ++k) out[k] = u1[k] * f1[k] + u2[k] * f2[k];
}

void axpy(double s, CRSpan x, RSpan y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += s * x[k];
}

void helmholtz_divide(CSpan f, int n, double alpha) {
  const int cols = n / 2 + 1;
  for (int r = 0; r < n; ++r) helmholtz_row(f.data() + static_cast<std::size_t>(r) * cols, r, n, alpha);
}

void leray(CSpan u1, CSpan u2, int n) {
  const int cols = n / 2 + 1;
  for (int r = 0; r < n; ++r) {
    const std::size_t off = static_cast<std::size_t>(r) * cols;
    leray_row(u1.data() + off, u2.data() + off, r, n);
  }
}

}  // namespace ref
}  // namespace nematic::kernels
