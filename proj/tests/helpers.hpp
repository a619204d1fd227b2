#pragma once

#include <random>

#include "doctest.h"
#include "frame_iterates/errors.hpp"
#include "frame_iterates/numerics.hpp"

namespace fi::test {

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = Complex(n(rng), n(rng));
    return a;
}

inline CMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
    Eigen::HouseholderQR<CMatrix> qr(random_matrix(n, n, seed));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

inline CVector unit(Eigen::Index n, Eigen::Index i) {
    CVector e = CVector::Zero(n);
    e(i) = 1.0;
    return e;
}

template <class F>
ErrorKind thrown_kind(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an fi::Error");
    return ErrorKind::ContractViolation;
}

}  // namespace fi::test
