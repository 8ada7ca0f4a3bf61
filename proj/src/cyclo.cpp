#include "toric/cyclo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace toric {

long euler_phi(long n) {
    long result = n;
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

namespace {

// Dense integer polynomials, coefficient of x^i at index i.
using IPoly = std::vector<Int>;

void trim(IPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of a by monic-leading b; throws if not exact.
IPoly divide_exact(IPoly a, const IPoly& b) {
    IPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Int(0));
    const Int& lead = b.back();
    for (long i = static_cast<long>(a.size()) - 1; i >= static_cast<long>(b.size()) - 1; --i) {
        if (a[i] == 0) continue;
        if (a[i] % lead != 0) throw std::logic_error("divide_exact: not divisible");
        Int c = a[i] / lead;
        q[i - (b.size() - 1)] = c;
        for (size_t j = 0; j < b.size(); ++j) a[i - (b.size() - 1) + j] -= c * b[j];
    }
    trim(a);
    if (!a.empty()) throw std::logic_error("divide_exact: nonzero remainder");
    return q;
}

IPoly cyclotomic_poly(long n, std::map<long, IPoly>& memo) {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    // x^n - 1 divided by Phi_d over all proper divisors d of n.
    IPoly num(n + 1, Int(0));
    num[0] = -1;
    num[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d == 0) num = divide_exact(std::move(num), cyclotomic_poly(d, memo));
    }
    memo[n] = num;
    return num;
}

std::map<long, IPoly>& phi_memo() {
    static std::map<long, IPoly> memo;
    return memo;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

CycContext::CycContext(long N) : n_(N) {
    if (N < 1) throw std::invalid_argument("CycContext: N must be positive");
    phi_ = cyclotomic_poly(N, phi_memo());
    degree_ = static_cast<long>(phi_.size()) - 1;
    // Rows for x^(degree+k) by repeated shift-and-reduce; products need
    // exponents up to 2*degree-2 and root_of_unity up to N-1.
    long rows = std::max(degree_ - 1, n_ - degree_);
    std::vector<Int> row(degree_, Int(0));
    for (long i = 0; i < degree_; ++i) row[i] = -phi_[i]; // x^degree = -(lower part)
    reduce_rows_.push_back(row);
    for (long k = 1; k < rows; ++k) {
        std::vector<Int> next(degree_, Int(0));
        Int top = row[degree_ - 1];
        for (long i = degree_ - 1; i >= 1; --i) next[i] = row[i - 1];
        next[0] = 0;
        if (top != 0) {
            for (long i = 0; i < degree_; ++i) next[i] += top * reduce_rows_[0][i];
        }
        reduce_rows_.push_back(next);
        row = std::move(next);
    }
}

std::shared_ptr<const CycContext> CycContext::get(long N) {
    static std::map<long, std::shared_ptr<const CycContext>> registry;
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = registry.find(N);
    if (it != registry.end()) return it->second;
    auto ctx = std::shared_ptr<const CycContext>(new CycContext(N));
    registry[N] = ctx;
    return ctx;
}

Cyc Cyc::zero(std::shared_ptr<const CycContext> ctx) {
    std::vector<Rational> c(ctx->degree());
    return Cyc(std::move(ctx), std::move(c));
}

Cyc Cyc::one(std::shared_ptr<const CycContext> ctx) { return from_rational(std::move(ctx), Rational(1)); }

Cyc Cyc::from_rational(std::shared_ptr<const CycContext> ctx, const Rational& r) {
    std::vector<Rational> c(ctx->degree());
    c[0] = r;
    return Cyc(std::move(ctx), std::move(c));
}

Cyc Cyc::root_of_unity(std::shared_ptr<const CycContext> ctx, long k) {
    long N = ctx->N();
    k %= N;
    if (k < 0) k += N;
    long deg = ctx->degree();
    std::vector<Rational> c(deg);
    if (k < deg) {
        c[k] = Rational(1);
    } else {
        const auto& row = ctx->power_row(k - deg);
        for (long i = 0; i < deg; ++i) c[i] = Rational(row[i]);
    }
    return Cyc(std::move(ctx), std::move(c));
}

bool Cyc::is_zero() const {
    for (const auto& c : coeffs_)
        if (!c.is_zero()) return false;
    return true;
}

bool Cyc::is_one() const {
    if (coeffs_.empty() || !coeffs_[0].is_one()) return false;
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (!coeffs_[i].is_zero()) return false;
    return true;
}

namespace {
void check_same_context(const Cyc& a, const Cyc& b) {
    if (a.context() != b.context()) throw std::invalid_argument("Cyc: context mismatch");
}
} // namespace

Cyc operator+(const Cyc& a, const Cyc& b) {
    check_same_context(a, b);
    std::vector<Rational> c(a.coeffs_);
    for (size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs_[i];
    return Cyc(a.ctx_, std::move(c));
}

Cyc operator-(const Cyc& a, const Cyc& b) {
    check_same_context(a, b);
    std::vector<Rational> c(a.coeffs_);
    for (size_t i = 0; i < c.size(); ++i) c[i] -= b.coeffs_[i];
    return Cyc(a.ctx_, std::move(c));
}

Cyc Cyc::operator-() const {
    std::vector<Rational> c(coeffs_);
    for (auto& x : c) x = -x;
    return Cyc(ctx_, std::move(c));
}

Cyc operator*(const Cyc& a, const Cyc& b) {
    check_same_context(a, b);
    long deg = a.ctx_->degree();
    std::vector<Rational> prod(2 * deg - 1);
    for (long i = 0; i < deg; ++i) {
        if (a.coeffs_[i].is_zero()) continue;
        for (long j = 0; j < deg; ++j) {
            if (b.coeffs_[j].is_zero()) continue;
            prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    std::vector<Rational> c(prod.begin(), prod.begin() + deg);
    for (long k = deg; k < 2 * deg - 1; ++k) {
        if (prod[k].is_zero()) continue;
        const auto& row = a.ctx_->power_row(k - deg);
        for (long i = 0; i < deg; ++i) {
            if (row[i] != 0) c[i] += prod[k] * Rational(row[i]);
        }
    }
    return Cyc(a.ctx_, std::move(c));
}

namespace {

// Rational polynomials for the extended Euclid behind Cyc::inv.
using QPoly = std::vector<Rational>;

void qtrim(QPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

QPoly qsub(QPoly a, const QPoly& b) {
    if (b.size() > a.size()) a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    qtrim(a);
    return a;
}

QPoly qmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly c(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    qtrim(c);
    return c;
}

// Division with remainder: returns {q, r} with a = q*b + r, deg r < deg b.
std::pair<QPoly, QPoly> qdivmod(QPoly a, const QPoly& b) {
    QPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
    const Rational& lead = b.back();
    while (!a.empty() && a.size() >= b.size()) {
        Rational c = a.back() / lead;
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
        qtrim(a); // top coefficient cancels exactly
    }
    return {q, a};
}

} // namespace

Cyc Cyc::inv() const {
    if (is_zero()) throw std::domain_error("Cyc: division by zero");
    long deg = ctx_->degree();
    QPoly a(coeffs_);
    qtrim(a);
    QPoly m(deg + 1);
    for (long i = 0; i <= deg; ++i) m[i] = Rational(ctx_->phi_coeffs()[i]);
    // Extended Euclid: s*a + t*m = gcd; gcd is a nonzero constant since Phi_N
    // is irreducible over Q and a != 0 of smaller degree.
    QPoly r0 = m, r1 = a;
    QPoly s0 = {}, s1 = {Rational(1)};
    while (true) {
        auto [q, r] = qdivmod(r0, r1);
        if (r.empty()) break;
        QPoly s2 = qsub(s0, qmul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        if (r1.size() == 1) break;
    }
    if (r1.size() != 1) throw std::logic_error("Cyc::inv: gcd not constant");
    Rational scale = Rational(1) / r1[0];
    std::vector<Rational> c(deg);
    for (size_t i = 0; i < s1.size() && i < static_cast<size_t>(deg); ++i) c[i] = s1[i] * scale;
    return Cyc(ctx_, std::move(c));
}

Cyc Cyc::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    Cyc result = Cyc::one(ctx_);
    Cyc base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

Cyc Cyc::galois(long k) const {
    long N = ctx_->N();
    k %= N;
    if (k < 0) k += N;
    if (std::gcd(k, N) != 1) throw std::invalid_argument("Cyc::galois: exponent not coprime to N");
    Cyc result = Cyc::zero(ctx_);
    for (long i = 0; i < ctx_->degree(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        Cyc term = Cyc::root_of_unity(ctx_, (i * k) % N);
        for (auto& c : term.coeffs_) c *= coeffs_[i];
        result = result + term;
    }
    return result;
}

Cyc Cyc::conj() const { return ctx_->N() == 1 ? *this : galois(ctx_->N() - 1); }

Cyc Cyc::abs_sq() const { return *this * conj(); }

bool operator==(const Cyc& a, const Cyc& b) {
    check_same_context(a, b);
    return a.coeffs_ == b.coeffs_;
}

bool Cyc::is_rational() const {
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (!coeffs_[i].is_zero()) return false;
    return true;
}

Rational Cyc::as_rational() const {
    if (!is_rational()) throw NotRational();
    return coeffs_.empty() ? Rational(0) : coeffs_[0];
}

std::complex<double> Cyc::to_float() const {
    std::complex<double> z(0.0, 0.0);
    const double tau = 6.283185307179586476925286766559;
    for (long i = 0; i < ctx_->degree(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        double arg = tau * static_cast<double>(i) / static_cast<double>(ctx_->N());
        z += coeffs_[i].to_double() * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    return z;
}

Cyc Cyc::lift_context(const std::shared_ptr<const CycContext>& bigger) const {
    long N = ctx_->N();
    long M = bigger->N();
    if (M % N != 0) throw std::invalid_argument("Cyc::lift_context: target order not a multiple");
    long step = M / N;
    Cyc result = Cyc::zero(bigger);
    for (long i = 0; i < ctx_->degree(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        Cyc term = Cyc::root_of_unity(bigger, i * step);
        for (auto& c : term.coeffs_) c *= coeffs_[i];
        result = result + term;
    }
    return result;
}

std::string Cyc::str() const {
    if (is_zero()) return "0";
    std::string out;
    for (long i = 0; i < ctx_->degree(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += coeffs_[i].str();
        if (i > 0) out += "*z^" + std::to_string(i);
    }
    return out + " [z=zeta_" + std::to_string(ctx_->N()) + "]";
}

} // namespace toric
