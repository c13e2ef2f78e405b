// Dense row-major complex matrix plus the handful of operations the simulator needs.
#pragma once

#include <cstddef>
#include <vector>

#include "fockbit/kernels.hpp"

namespace fockbit {

struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> data; // row-major, rows*cols entries

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    static ComplexMatrix identity(std::size_t n);

    cplx& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    cplx* row(std::size_t i) { return data.data() + i * cols; }
    const cplx* row(std::size_t i) const { return data.data() + i * cols; }
    bool square() const { return rows == cols; }
};

// C = A * B. Skips exact-zero coefficients of A, so diagonal or sparse-ish factors cost
// proportionally less; the inner update is a kernel axpy over contiguous rows of B.
ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b);

// C = A * B^dagger, computed row-by-row with dotc (both operands walked contiguously).
ComplexMatrix mul_adjB(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& a);
void adjoint_in_place(ComplexMatrix& a); // square only

cplx trace(const ComplexMatrix& a);
void scale_in_place(ComplexMatrix& a, cplx factor);
ComplexMatrix add_scaled(const ComplexMatrix& a, cplx factor, const ComplexMatrix& b); // a + factor*b

double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& a);
// max_ij |A[i][j] - conj(A[j][i])|
double hermiticity_defect(const ComplexMatrix& a);
bool all_finite(const ComplexMatrix& a);

} // namespace fockbit
