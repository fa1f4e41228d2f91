#pragma once

// Pointwise and per-mode loops of the solver. The functions in `nematic::kernels`
// are OpenMP-parallel; `nematic::kernels::ref` holds serial reference versions with
// identical signatures, kept for testing and benchmarking. Both evaluate the same
// per-point expressions, so results agree bit for bit.
//
// Reductions stay serial in both variants: a fixed summation order keeps runs
// reproducible regardless of the thread count.

#include <complex>
#include <cstddef>
#include <span>

namespace nematic::kernels {

using RSpan = std::span<double>;
using CRSpan = std::span<const double>;
using CSpan = std::span<std::complex<double>>;

// Loops shorter than this run on one thread.
inline constexpr std::size_t kParallelThreshold = 1 << 14;

// Velocity gradient components, g_ij = d_j u_i.
struct GradU {
  CRSpan g11, g12, g21, g22;
};

// Spatial derivatives of (p, q).
struct GradQ {
  CRSpan dp1, dp2, dq1, dq2;
};

struct TensorOut {
  RSpan t11, t12, t21, t22;
};

void set_num_threads(int threads);
int max_threads();

// Bulk part of the molecular field: -a Q - c tr(Q^2) Q, in (p, q) components.
void bulk_field(CRSpan p, CRSpan q, double a, double c, RSpan outp, RSpan outq);

// Directional derivative of the bulk map at Q along X:
// -a X - c (tr(Q^2) X + 2 tr(QX) Q).
void linearized_bulk(CRSpan p, CRSpan q, CRSpan xp, CRSpan xq, double a, double c, RSpan outp,
                     RSpan outq);

// S(grad u, Q) evaluated as a full 2x2 matrix and reduced to (p, q). Returns the
// largest symmetry or trace defect of the unreduced matrix.
double stretching(const GradU& g, CRSpan p, CRSpan q, double xi, RSpan outp, RSpan outq);

// tau = -xi((Q+I/2)H + H(Q+I/2)) + 2 xi (Q+I/2) tr(QH) - L gradQ (.) gradQ, times `sign`.
void stress_tau(CRSpan p, CRSpan q, CRSpan hp, CRSpan hq, const GradQ& dq, double xi, double L,
                double sign, const TensorOut& out);

// sigma = QH - HQ.
void stress_sigma(CRSpan p, CRSpan q, CRSpan hp, CRSpan hq, const TensorOut& out);

// out = u1 * f1 + u2 * f2.
void advect(CRSpan u1, CRSpan u2, CRSpan f1, CRSpan f2, RSpan out);

// y += s * x.
void axpy(double s, CRSpan x, RSpan y);

// Spectral multipliers on the half-spectrum layout (n rows, n/2+1 columns).
// Divides each mode by 1 + alpha 4 pi^2 |k|^2.
void helmholtz_divide(CSpan f, int n, double alpha);
// Removes the longitudinal part u <- u - k (k.u)/|k|^2 and zeroes the mean.
void leray(CSpan u1, CSpan u2, int n);

}  // namespace nematic::kernels

namespace nematic::kernels::ref {

using nematic::kernels::CRSpan;
using nematic::kernels::CSpan;
using nematic::kernels::GradQ;
using nematic::kernels::GradU;
using nematic::kernels::RSpan;
using nematic::kernels::TensorOut;

void bulk_field(CRSpan p, CRSpan q, double a, double c, RSpan outp, RSpan outq);
void linearized_bulk(CRSpan p, CRSpan q, CRSpan xp, CRSpan xq, double a, double c, RSpan outp,
                     RSpan outq);
double stretching(const GradU& g, CRSpan p, CRSpan q, double xi, RSpan outp, RSpan outq);
void stress_tau(CRSpan p, CRSpan q, CRSpan hp, CRSpan hq, const GradQ& dq, double xi, double L,
                double sign, const TensorOut& out);
void stress_sigma(CRSpan p, CRSpan q, CRSpan hp, CRSpan hq, const TensorOut& out);
void advect(CRSpan u1, CRSpan u2, CRSpan f1, CRSpan f2, RSpan out);
void axpy(double s, CRSpan x, RSpan y);
void helmholtz_divide(CSpan f, int n, double alpha);
void leray(CSpan u1, CSpan u2, int n);

}  // namespace nematic::kernels::ref
