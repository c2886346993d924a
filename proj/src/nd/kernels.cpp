#include "kernels.hpp"

#include <algorithm>

namespace sememe::nd::kernels {

Real dot(const Real* x, const Real* y, std::size_t n) {
  Real s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

void axpy(Real alpha, const Real* x, Real* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

namespace {

constexpr std::size_t kBlock = 16;

// Columns j0..j0+W of one output row, accumulated in registers over p in
// increasing order.
template <std::size_t W>
void row_block(const Real* arow, const Real* b, Real* crow, std::size_t k, std::size_t n, std::size_t j0) {
  Real acc[W] = {};
  for (std::size_t p = 0; p < k; ++p) {
    const Real av = arow[p];
    const Real* brow = b + p * n + j0;
    for (std::size_t j = 0; j < W; ++j) acc[j] += av * brow[j];
  }
  for (std::size_t j = 0; j < W; ++j) crow[j0 + j] = acc[j];
}

// gb[p, j0..j0+W] += sum over rows i, in increasing i.
template <std::size_t W>
void grad_b_block(const Real* a, const Real* g, Real* gb, std::size_t m, std::size_t k, std::size_t n,
                  std::size_t j0) {
  for (std::size_t p = 0; p < k; ++p) {
    Real acc[W];
    Real* out = gb + p * n + j0;
    for (std::size_t j = 0; j < W; ++j) acc[j] = out[j];
    for (std::size_t i = 0; i < m; ++i) {
      const Real av = a[i * k + p];
      const Real* grow = g + i * n + j0;
      for (std::size_t j = 0; j < W; ++j) acc[j] += av * grow[j];
    }
    for (std::size_t j = 0; j < W; ++j) out[j] = acc[j];
  }
}

}  // namespace

// Column blocks outermost so that a [k, 16] strip of b stays in cache while
// every row of a passes over it. Each output element is a plain sum over p in
// increasing order, whatever m is.
void matmul(const Real* a, const Real* b, Real* c, std::size_t m, std::size_t k, std::size_t n) {
  std::size_t j = 0;
  for (; j + kBlock <= n; j += kBlock)
    for (std::size_t i = 0; i < m; ++i) row_block<kBlock>(a + i * k, b, c + i * n, k, n, j);
  for (; j + 4 <= n; j += 4)
    for (std::size_t i = 0; i < m; ++i) row_block<4>(a + i * k, b, c + i * n, k, n, j);
  for (; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) row_block<1>(a + i * k, b, c + i * n, k, n, j);
}

void matmul_grad_a(const Real* g, const Real* b, Real* ga, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t p = 0; p < k; ++p) {
    const Real* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) ga[i * k + p] += dot(g + i * n, brow, n);
  }
}

void matmul_grad_b(const Real* a, const Real* g, Real* gb, std::size_t m, std::size_t k, std::size_t n) {
  std::size_t j = 0;
  for (; j + kBlock <= n; j += kBlock) grad_b_block<kBlock>(a, g, gb, m, k, n, j);
  for (; j + 4 <= n; j += 4) grad_b_block<4>(a, g, gb, m, k, n, j);
  for (; j < n; ++j) grad_b_block<1>(a, g, gb, m, k, n, j);
}

}  // namespace sememe::nd::kernels
