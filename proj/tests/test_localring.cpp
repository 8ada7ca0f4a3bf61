#include "doctest.h"

#include "toric/localring.hpp"

#include <random>

using namespace toric;

namespace {

RingElt random_elt(const std::shared_ptr<const TruncRing>& ring, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> digit(0, ring->residue_field().size() - 1);
    std::vector<long> d(ring->level());
    for (auto& v : d) v = digit(rng);
    return RingElt::from_digits(ring, d);
}

} // namespace

TEST_CASE("teichmuller lift properties (both modes)") {
    for (RingMode mode : {RingMode::UnramifiedMixed, RingMode::EqualChar}) {
        auto ring = TruncRing::get(mode, 3, 1, 2, 2); // q=3, width 2, level 2
        long q2 = ring->residue_field().size();      // 9
        RingElt zeta = ring->teich_pow(1);
        CHECK(zeta.pow(q2 - 1) == ring->one());
        for (long k = 1; k < q2 - 1; ++k) CHECK(!(zeta.pow(k) == ring->one()));

        // multiplicativity on residue units
        const auto& fq = ring->residue_field();
        for (long a = 1; a < q2; ++a)
            for (long b = 1; b < q2; ++b)
                CHECK(ring->teichmuller(fq.mul(a, b)) == ring->teichmuller(a) * ring->teichmuller(b));

        // level 1: the lift is the seed itself
        auto r1 = ring->at_level(1);
        CHECK(r1->teichmuller(fq.exp(1)).residue() == fq.exp(1));
    }
}

TEST_CASE("teichmuller fixed point example p=3 f=1 j=2") {
    auto ring = TruncRing::get(RingMode::UnramifiedMixed, 3, 1, 2, 2);
    RingElt tau = ring->teich_pow(1);
    // fixed point of x -> x^9 mod (9, h)
    CHECK(tau.pow(9) == tau);
    CHECK(tau.pow(8) == ring->one());
}

TEST_CASE("frobenius is an involution fixing the base") {
    std::mt19937_64 rng(42);
    for (RingMode mode : {RingMode::UnramifiedMixed, RingMode::EqualChar}) {
        auto ring = TruncRing::get(mode, 5, 1, 2, 3);
        RingElt tau = ring->teich_pow(1);
        CHECK(tau.frobenius() == tau.pow(ring->q()));
        for (int t = 0; t < 25; ++t) {
            RingElt x = random_elt(ring, rng);
            RingElt y = random_elt(ring, rng);
            CHECK(x.frobenius().frobenius() == x);
            CHECK((x * y).frobenius() == x.frobenius() * y.frobenius());
            CHECK((x + y).frobenius() == x.frobenius() + y.frobenius());
            CHECK(x.trace_to_base().is_base());
            CHECK(x.norm_to_base().is_base());
        }
        // sigma fixes integers
        CHECK(ring->from_int(7).frobenius() == ring->from_int(7));
    }
}

TEST_CASE("trace and norm identities") {
    for (RingMode mode : {RingMode::UnramifiedMixed, RingMode::EqualChar}) {
        auto ring = TruncRing::get(mode, 3, 1, 2, 2);
        long q = ring->q();
        RingElt tau = ring->teich_pow(1);
        // trace(tau^((q+1)/2)) = 0 since zeta^((q^2-1)/2) = -1
        CHECK(tau.pow((q + 1) / 2).trace_to_base().is_zero());
        CHECK(tau.norm_to_base() == tau.pow(q + 1));
        CHECK(ring->one().trace_to_base() == ring->from_int(2));
    }
}

TEST_CASE("ring axioms and inversion on random elements") {
    std::mt19937_64 rng(7);
    for (RingMode mode : {RingMode::UnramifiedMixed, RingMode::EqualChar}) {
        auto ring = TruncRing::get(mode, 3, 1, 2, 3);
        for (int t = 0; t < 30; ++t) {
            RingElt x = random_elt(ring, rng);
            RingElt y = random_elt(ring, rng);
            RingElt z = random_elt(ring, rng);
            CHECK((x + y) * z == x * z + y * z);
            CHECK(x * y == y * x);
            CHECK((x * y) * z == x * (y * z));
            if (x.is_unit()) CHECK(x * x.inv() == ring->one());
        }
        CHECK_THROWS_AS(ring->from_int(3).inv(), NonUnit);
    }
}

TEST_CASE("digit expansion round trip and valuation") {
    std::mt19937_64 rng(11);
    for (RingMode mode : {RingMode::UnramifiedMixed, RingMode::EqualChar}) {
        auto ring = TruncRing::get(mode, 5, 1, 2, 3);
        for (int t = 0; t < 30; ++t) {
            RingElt x = random_elt(ring, rng);
            CHECK(RingElt::from_digits(ring, x.digits()) == x);
            auto d = x.digits();
            long v = 0;
            while (v < ring->level() && d[v] == 0) ++v;
            CHECK(x.valuation() == v);
        }
        RingElt u = ring->teich_pow(3);
        RingElt shifted = RingElt::from_digits(ring, {0, 0, u.digits()[0]});
        CHECK(shifted.valuation() == 2);
        CHECK(shifted.shift_down(2) == u.reduce_to(1));
        CHECK(u.lift_to(5).reduce_to(3) == u);
    }
}

TEST_CASE("psi0 conductor and additivity") {
    for (RingMode mode : {RingMode::UnramifiedMixed, RingMode::EqualChar}) {
        auto ring = TruncRing::get(mode, 3, 1, 2, 3);

        // val = 0: trivial
        CHECK(AdditivePsi0::eval(ring->one(), 0).is_one());

        // p=3, f=1, val=-1, u=1 -> zeta_3
        RootOfUnity r = AdditivePsi0::eval(ring->one(), -1);
        CHECK(r.order == 3);
        CHECK(r.exp == 1);

        // additivity on random frobenius-fixed pairs
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<long> digit(0, ring->residue_field().size() - 1);
        auto random_base = [&]() {
            std::vector<long> d(ring->level());
            for (auto& v : d) {
                long raw = digit(rng);
                // symmetrize into the fixed subfield
                const auto& fq = ring->residue_field();
                v = fq.mul(fq.add(raw, fq.pow_q(raw, ring->q())), (ring->p() + 1) / 2);
            }
            return RingElt::from_digits(ring, d);
        };
        for (int t = 0; t < 30; ++t) {
            RingElt x = random_base();
            RingElt y = random_base();
            for (long val = -1; val >= -3; --val) {
                CHECK(AdditivePsi0::eval(x + y, val) ==
                      AdditivePsi0::eval(x, val).mul(AdditivePsi0::eval(y, val)));
            }
        }

        // the pairing (x, y) -> psi0(pi^-v * x * y) on O/P^v is perfect:
        // every nonzero x is detected by some y
        const auto& fq = ring->residue_field();
        auto fixed_elts = [&](long v) {
            std::vector<RingElt> out;
            std::vector<long> d(v, 0);
            auto subfield = [&](long i) {
                // i-th element of the fixed subfield F_q inside F_{q^2}
                return i == 0 ? 0 : fq.exp(static_cast<long>(Int(Int(i - 1) * (ring->q() + 1))));
            };
            long total = 1;
            for (long s = 0; s < v; ++s) total *= ring->q();
            for (long m = 0; m < total; ++m) {
                long t = m;
                std::vector<long> dg(ring->level(), 0);
                for (long s = 0; s < v; ++s) {
                    dg[s] = subfield(t % ring->q());
                    t /= ring->q();
                }
                out.push_back(RingElt::from_digits(ring, dg));
            }
            return out;
        };
        for (long v = 1; v <= 3; ++v) {
            auto elts = fixed_elts(v);
            for (const auto& x : elts) {
                if (x.reduce_to(v).is_zero()) continue;
                bool detected = false;
                for (const auto& y : elts) {
                    if (!AdditivePsi0::eval(x * y, -v).is_one()) {
                        detected = true;
                        break;
                    }
                }
                CHECK(detected);
            }
        }

        CHECK_THROWS_AS(AdditivePsi0::eval(ring->one().reduce_to(1), -2), PrecisionError);
    }
}

TEST_CASE("psi0 depth consistency in mixed mode") {
    auto ring = TruncRing::get(RingMode::UnramifiedMixed, 3, 1, 2, 3);
    // psi0(p*u at depth -2) = psi0(u at depth -1)
    RingElt u = ring->from_int(2);
    RingElt pu = ring->from_int(6);
    CHECK(AdditivePsi0::eval(pu, -2) == AdditivePsi0::eval(u, -1));
}

TEST_CASE("width-1 rings work for base-field digits") {
    auto ring = TruncRing::get(RingMode::UnramifiedMixed, 7, 1, 1, 3);
    RingElt g = ring->teich_pow(1);
    CHECK(g.pow(6) == ring->one());
    CHECK(AdditivePsi0::eval(ring->from_int(1), -1) == RootOfUnity::make(7, 1));
}
