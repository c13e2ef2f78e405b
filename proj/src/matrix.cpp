#include "fockbit/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "fockbit/errors.hpp"

namespace fockbit {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) throw ValidationError("mul: inner dimensions disagree");
    ComplexMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        cplx* out = c.row(i);
        const cplx* arow = a.row(i);
        for (std::size_t k = 0; k < a.cols; ++k) {
            const cplx coeff = arow[k];
            if (coeff == cplx(0.0, 0.0)) continue; // diagonal/sparse factors skip whole rows
            kern::axpy(coeff, b.row(k), out, b.cols);
        }
    }
    return c;
}

ComplexMatrix mul_adjB(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.cols) throw ValidationError("mul_adjB: inner dimensions disagree");
    ComplexMatrix c(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.rows; ++j)
            c.at(i, j) = kern::dotc(b.row(j), a.row(i), a.cols); // sum_k a[i][k] conj(b[j][k])
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix r(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) r.at(j, i) = std::conj(a.at(i, j));
    return r;
}

void adjoint_in_place(ComplexMatrix& a) {
    if (!a.square()) throw ValidationError("adjoint_in_place: matrix not square");
    for (std::size_t i = 0; i < a.rows; ++i) {
        a.at(i, i) = std::conj(a.at(i, i));
        for (std::size_t j = i + 1; j < a.cols; ++j) {
            const cplx t = std::conj(a.at(i, j));
            a.at(i, j) = std::conj(a.at(j, i));
            a.at(j, i) = t;
        }
    }
}

cplx trace(const ComplexMatrix& a) {
    cplx t = 0.0;
    const std::size_t n = std::min(a.rows, a.cols);
    for (std::size_t i = 0; i < n; ++i) t += a.at(i, i);
    return t;
}

void scale_in_place(ComplexMatrix& a, cplx factor) {
    kern::scal(factor, a.data.data(), a.data.size());
}

ComplexMatrix add_scaled(const ComplexMatrix& a, cplx factor, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw ValidationError("add_scaled: shape mismatch");
    ComplexMatrix c = a;
    kern::axpy(factor, b.data.data(), c.data.data(), c.data.size());
    return c;
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const cplx& v : a.data) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw ValidationError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const cplx& v : a.data) s += std::norm(v);
    return std::sqrt(s);
}

double hermiticity_defect(const ComplexMatrix& a) {
    if (!a.square()) throw ValidationError("hermiticity_defect: matrix not square");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i; j < a.cols; ++j)
            m = std::max(m, std::abs(a.at(i, j) - std::conj(a.at(j, i))));
    return m;
}

bool all_finite(const ComplexMatrix& a) {
    for (const cplx& v : a.data)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

} // namespace fockbit
