#pragma once

#include "toric/rational.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace toric {

struct NotRational : std::domain_error {
    NotRational() : std::domain_error("value is not rational") {}
};

// Arithmetic data for Q(zeta_N): the N-th cyclotomic polynomial and reduction
// tables for exponents in [phi(N), 2*phi(N)-2].
class CycContext {
public:
    static std::shared_ptr<const CycContext> get(long N);

    long N() const { return n_; }
    long degree() const { return degree_; }
    // Monic Phi_N, coefficient of x^i at index i (length degree+1).
    const std::vector<Int>& phi_coeffs() const { return phi_; }
    // x^(degree+k) mod Phi_N as a coefficient row of length degree.
    const std::vector<Int>& power_row(long k) const { return reduce_rows_[k]; }

private:
    explicit CycContext(long N);

    long n_ = 0;
    long degree_ = 0;
    std::vector<Int> phi_;
    std::vector<std::vector<Int>> reduce_rows_;
};

// Exact element of Q(zeta_N), stored as phi(N) rational coefficients of
// powers of zeta_N reduced mod Phi_N.
class Cyc {
public:
    Cyc() = default;

    static Cyc zero(std::shared_ptr<const CycContext> ctx);
    static Cyc one(std::shared_ptr<const CycContext> ctx);
    static Cyc from_rational(std::shared_ptr<const CycContext> ctx, const Rational& r);
    // zeta_N^k (k arbitrary, reduced mod N).
    static Cyc root_of_unity(std::shared_ptr<const CycContext> ctx, long k);

    const std::shared_ptr<const CycContext>& context() const { return ctx_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_one() const;

    friend Cyc operator+(const Cyc& a, const Cyc& b);
    friend Cyc operator-(const Cyc& a, const Cyc& b);
    friend Cyc operator*(const Cyc& a, const Cyc& b);
    Cyc operator-() const;
    Cyc inv() const;
    Cyc pow(long e) const;
    // Galois automorphism zeta |-> zeta^(N-1); complex conjugation.
    Cyc conj() const;
    // x * conj(x), fixed by conj.
    Cyc abs_sq() const;

    friend bool operator==(const Cyc& a, const Cyc& b);
    friend bool operator!=(const Cyc& a, const Cyc& b) { return !(a == b); }

    Rational as_rational() const; // throws NotRational unless all higher coeffs vanish
    bool is_rational() const;
    std::complex<double> to_float() const; // report output only, never for decisions

    // Reinterpret in Q(zeta_N') for N | N', via zeta_N = zeta_N'^(N'/N).
    Cyc lift_context(const std::shared_ptr<const CycContext>& bigger) const;

    // Galois map zeta |-> zeta^k, gcd(k, N) = 1.
    Cyc galois(long k) const;

    std::string str() const;

private:
    Cyc(std::shared_ptr<const CycContext> ctx, std::vector<Rational> coeffs)
        : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {}

    std::shared_ptr<const CycContext> ctx_;
    std::vector<Rational> coeffs_;
};

long euler_phi(long n);
long lcm_long(long a, long b);

} // namespace toric
