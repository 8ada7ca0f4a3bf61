#include "doctest.h"

#include "toric/cyclo.hpp"

#include <random>

using namespace toric;

namespace {

// Independent oracle: naive polynomial long division over Z, used to recompute
// Phi_12 from x^12 - 1 without going through CycContext's recursion.
std::vector<long> poly_div_oracle(std::vector<long> num, const std::vector<long>& den) {
    std::vector<long> q(num.size() - den.size() + 1, 0);
    for (long i = static_cast<long>(num.size()) - 1; i >= static_cast<long>(den.size()) - 1; --i) {
        long c = num[i] / den.back();
        q[i - (den.size() - 1)] = c;
        for (size_t j = 0; j < den.size(); ++j) num[i - (den.size() - 1) + j] -= c * den[j];
    }
    for (long v : num) REQUIRE(v == 0);
    return q;
}

Cyc random_elt(const std::shared_ptr<const CycContext>& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> coef(-5, 5);
    Cyc x = Cyc::zero(ctx);
    for (long i = 0; i < ctx->degree(); ++i) {
        Cyc t = Cyc::root_of_unity(ctx, i);
        Cyc c = Cyc::from_rational(ctx, Rational(coef(rng)));
        x = x + c * t;
    }
    return x;
}

} // namespace

TEST_CASE("cyclotomic polynomials at small orders") {
    auto c1 = CycContext::get(1);
    CHECK(c1->degree() == 1);
    CHECK(c1->phi_coeffs() == std::vector<Int>{Int(-1), Int(1)});

    auto c4 = CycContext::get(4);
    CHECK(c4->degree() == 2);
    CHECK(c4->phi_coeffs() == std::vector<Int>{Int(1), Int(0), Int(1)});
}

TEST_CASE("Phi_12 against a long-division oracle") {
    // x^12-1 divided by Phi_1 Phi_2 Phi_3 Phi_4 Phi_6 computed independently.
    std::vector<long> num(13, 0);
    num[0] = -1;
    num[12] = 1;
    num = poly_div_oracle(num, {-1, 1});        // Phi_1
    num = poly_div_oracle(num, {1, 1});         // Phi_2
    num = poly_div_oracle(num, {1, 1, 1});      // Phi_3
    num = poly_div_oracle(num, {1, 0, 1});      // Phi_4
    num = poly_div_oracle(num, {1, -1, 1});     // Phi_6
    REQUIRE(num == std::vector<long>({1, 0, -1, 0, 1}));

    auto c12 = CycContext::get(12);
    REQUIRE(c12->degree() == 4);
    std::vector<Int> expect;
    for (long v : num) expect.push_back(Int(v));
    CHECK(c12->phi_coeffs() == expect);
}

TEST_CASE("roots of unity") {
    auto c4 = CycContext::get(4);
    CHECK(Cyc::root_of_unity(c4, 0).is_one());
    CHECK(Cyc::root_of_unity(c4, 2) == -Cyc::one(c4));

    auto c8 = CycContext::get(8);
    Cyc z = Cyc::root_of_unity(c8, 1);
    CHECK(z.pow(8).is_one());
    // multiplicative order is exactly N
    for (long k = 1; k < 8; ++k) CHECK(!z.pow(k).is_one());

    // (zeta_8 + zeta_8^7)^2 = 2
    Cyc s = Cyc::root_of_unity(c8, 1) + Cyc::root_of_unity(c8, 7);
    CHECK((s * s) == Cyc::from_rational(c8, Rational(2)));
}

TEST_CASE("field axioms and inverse on random elements") {
    std::mt19937_64 rng(12345);
    auto ctx = CycContext::get(12);
    for (int trial = 0; trial < 40; ++trial) {
        Cyc x = random_elt(ctx, rng);
        Cyc y = random_elt(ctx, rng);
        Cyc z = random_elt(ctx, rng);
        CHECK((x + y) * z == x * z + y * z);
        CHECK(x * y == y * x);
        CHECK((x * y) * z == x * (y * z));
        if (!x.is_zero()) CHECK((x * x.inv()).is_one());
    }
    CHECK((Cyc::root_of_unity(ctx, 5).inv() * Cyc::root_of_unity(ctx, 5)).is_one());
    CHECK((Cyc::zero(ctx) * random_elt(ctx, rng)).is_zero());
    CHECK_THROWS_AS(Cyc::zero(ctx).inv(), std::domain_error);
}

TEST_CASE("conjugation and absolute square") {
    auto c4 = CycContext::get(4);
    Cyc v = Cyc::one(c4) + Cyc::root_of_unity(c4, 1); // 1 + i
    CHECK(v.conj() == Cyc::one(c4) - Cyc::root_of_unity(c4, 1));
    CHECK(v.conj().conj() == v);
    CHECK(v.abs_sq() == Cyc::from_rational(c4, Rational(2)));
    CHECK(Cyc::zero(c4).abs_sq().is_zero());

    Cyc r = Cyc::from_rational(c4, Rational(7, 3));
    CHECK(r.conj() == r);

    std::mt19937_64 rng(99);
    auto c12 = CycContext::get(12);
    for (int trial = 0; trial < 20; ++trial) {
        Cyc x = random_elt(c12, rng);
        CHECK(x.abs_sq() == x.conj().abs_sq());
        CHECK(x.abs_sq().conj() == x.abs_sq());
    }
    for (long k = 0; k < 12; ++k) CHECK(Cyc::root_of_unity(c12, k).abs_sq().is_one());
}

TEST_CASE("as_rational and lift_context") {
    auto c3 = CycContext::get(3);
    CHECK(Cyc::from_rational(c3, Rational(2)).as_rational() == Rational(2));
    CHECK_THROWS_AS(Cyc::root_of_unity(c3, 1).as_rational(), NotRational);

    auto c4 = CycContext::get(4);
    auto c12 = CycContext::get(12);
    CHECK(Cyc::root_of_unity(c4, 1).lift_context(c12) == Cyc::root_of_unity(c12, 3));

    // lift is a ring homomorphism on sampled pairs
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Cyc x = random_elt(c4, rng);
        Cyc y = random_elt(c4, rng);
        CHECK((x * y).lift_context(c12) == x.lift_context(c12) * y.lift_context(c12));
        CHECK((x + y).lift_context(c12) == x.lift_context(c12) + y.lift_context(c12));
    }
}

TEST_CASE("to_float is close to the exact value") {
    auto c8 = CycContext::get(8);
    Cyc s = Cyc::root_of_unity(c8, 1) + Cyc::root_of_unity(c8, 7); // sqrt(2)
    CHECK(std::abs(s.to_float() - std::complex<double>(1.4142135623730951, 0)) < 1e-12);
}
