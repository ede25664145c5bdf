#include "visilat/numfield.hpp"

#include <algorithm>
#include <set>

#include "visilat/polymod.hpp"

namespace visilat {

bool AlgInt::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Integer& c) { return c == 0; });
}

bool is_squarefree(long d) {
    unsigned long a = d < 0 ? static_cast<unsigned long>(-(d + 1)) + 1 : static_cast<unsigned long>(d);
    if (a == 0) return false;
    for (unsigned long q = 2; q * q <= a; ++q) {
        if (a % (q * q) == 0) return false;
        if (a % q == 0) a /= q;
    }
    return true;
}

bool on_class_number_one_whitelist(long d) {
    static constexpr long whitelist[] = {-1, -2, -3, -7, -11, 2, 3, 5, 13};
    return std::find(std::begin(whitelist), std::end(whitelist), d) != std::end(whitelist);
}

namespace {

std::string poly_to_string(const std::vector<Integer>& f) {
    std::string s;
    for (std::size_t i = f.size(); i-- > 0;) {
        if (f[i] == 0) continue;
        Integer c = f[i];
        if (!s.empty()) s += c < 0 ? " - " : " + ";
        else if (c < 0) s += "-";
        c = abs(c);
        if (i == 0 || c != 1) s += c.get_str();
        if (i >= 1) s += "t";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

// Set of degrees d such that f has a factor of degree d modulo p.
std::set<int> factor_degree_sums(const fp::Poly& f, std::uint64_t p) {
    std::set<int> sums{0};
    for (const auto& fac : fp::factor(f, p)) {
        const int d = fp::degree(fac.poly);
        for (unsigned k = 0; k < fac.multiplicity; ++k) {
            std::set<int> next = sums;
            for (int s : sums) next.insert(s + d);
            sums = std::move(next);
        }
    }
    return sums;
}

bool has_integer_root(const std::vector<Integer>& f) {
    const Integer& a0 = f[0];
    if (a0 == 0) return true;
    auto eval = [&](const Integer& x) {
        Integer acc = 0;
        for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
        return acc;
    };
    Integer a = abs(a0);
    if (a > Integer("1000000000000")) {
        throw FieldError("cannot certify irreducibility of " + poly_to_string(f) + " (constant term too large)");
    }
    const std::uint64_t v = a.get_ui();
    for (std::uint64_t q = 1; q * q <= v; ++q) {
        if (v % q) continue;
        for (std::uint64_t r : {q, v / q}) {
            Integer x = from_uint64(r);
            if (eval(x) == 0 || eval(Integer(-x)) == 0) return true;
        }
    }
    return false;
}

void check_irreducible(const std::vector<Integer>& f, const Integer& disc) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n <= 1) return;
    if (disc == 0) throw FieldError("minimal polynomial " + poly_to_string(f) + " is not squarefree");

    // A factorization over Q of degree d survives modulo every p, so d must be
    // a sub-sum of factor degrees modulo every good prime.
    std::set<int> common;
    for (int i = 0; i <= n; ++i) common.insert(i);
    int good = 0;
    for (std::uint64_t p = 2; good < 200 && common.size() > 2; ++p) {
        if (!fp::is_prime(p) || mod_u64(disc, p) == 0) continue;
        ++good;
        std::set<int> sums = factor_degree_sums(fp::from_integers(f, p), p);
        std::set<int> keep;
        std::set_intersection(common.begin(), common.end(), sums.begin(), sums.end(),
                              std::inserter(keep, keep.begin()));
        common = std::move(keep);
    }
    if (common.size() == 2) return;
    if (has_integer_root(f)) throw FieldError("minimal polynomial " + poly_to_string(f) + " is reducible over Q");
    if (n <= 3) return;
    throw FieldError("cannot certify irreducibility of " + poly_to_string(f) +
                     " (every prime splits it compatibly with a nontrivial factorization)");
}

} // namespace

AlgInt Field::one() const { return from_integer(1); }

AlgInt Field::from_integer(const Integer& v) const {
    AlgInt a = zero();
    a.coords[0] = v;
    return a;
}

AlgInt Field::basis_element(std::size_t i) const {
    AlgInt a = zero();
    a.coords.at(i) = 1;
    return a;
}

AlgInt Field::element(std::vector<Integer> coords) const {
    AlgInt a(std::move(coords));
    check_same(a);
    return a;
}

void Field::check_same(const AlgInt& a) const {
    if (a.size() != n_)
        throw std::invalid_argument("element with " + std::to_string(a.size()) + " coordinates used in a degree-" +
                                    std::to_string(n_) + " field");
}

AlgInt Field::add(const AlgInt& a, const AlgInt& b) const {
    check_same(a);
    check_same(b);
    AlgInt r = a;
    for (std::size_t i = 0; i < n_; ++i) r.coords[i] += b.coords[i];
    return r;
}

AlgInt Field::sub(const AlgInt& a, const AlgInt& b) const {
    check_same(a);
    check_same(b);
    AlgInt r = a;
    for (std::size_t i = 0; i < n_; ++i) r.coords[i] -= b.coords[i];
    return r;
}

AlgInt Field::neg(const AlgInt& a) const {
    check_same(a);
    AlgInt r = a;
    for (auto& c : r.coords) c = -c;
    return r;
}

AlgInt Field::mul(const AlgInt& a, const AlgInt& b) const {
    check_same(a);
    check_same(b);
    AlgInt r = zero();
    for (std::size_t i = 0; i < n_; ++i) {
        if (a.coords[i] == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) {
            if (b.coords[j] == 0) continue;
            Integer ab = a.coords[i] * b.coords[j];
            for (std::size_t k = 0; k < n_; ++k) {
                const Integer& t = tensor(i, j, k);
                if (t != 0) r.coords[k] += ab * t;
            }
        }
    }
    return r;
}

IntMatrix Field::multiplication_matrix(const AlgInt& a) const {
    IntMatrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        AlgInt row = mul(a, basis_element(i));
        for (std::size_t k = 0; k < n_; ++k) m(i, k) = row.coords[k];
    }
    return m;
}

Integer Field::norm(const AlgInt& a) const {
    check_same(a);
    if (n_ == 1) return a.coords[0];
    if (n_ == 2) {
        // det [[a0*T00k + a1*T10k], [a0*T01k + a1*T11k]] without building AlgInts
        Integer m00 = a.coords[0] * tensor(0, 0, 0) + a.coords[1] * tensor(1, 0, 0);
        Integer m01 = a.coords[0] * tensor(0, 0, 1) + a.coords[1] * tensor(1, 0, 1);
        Integer m10 = a.coords[0] * tensor(0, 1, 0) + a.coords[1] * tensor(1, 1, 0);
        Integer m11 = a.coords[0] * tensor(0, 1, 1) + a.coords[1] * tensor(1, 1, 1);
        return m00 * m11 - m01 * m10;
    }
    return determinant(multiplication_matrix(a));
}

Integer Field::trace(const AlgInt& a) const {
    IntMatrix m = multiplication_matrix(a);
    Integer t = 0;
    for (std::size_t i = 0; i < n_; ++i) t += m(i, i);
    return t;
}

AlgInt Field::eval_at_generator(std::span<const Integer> poly) const {
    AlgInt theta = n_ > 1 ? basis_element(1) : from_integer(-minpoly_[0]);
    AlgInt acc = zero();
    for (std::size_t i = poly.size(); i-- > 0;) {
        acc = mul(acc, theta);
        acc.coords[0] += poly[i];
    }
    return acc;
}

std::string Field::name() const {
    switch (descriptor_.kind) {
    case FieldKind::rational: return "Q";
    case FieldKind::quadratic: return "Q(sqrt(" + std::to_string(descriptor_.d) + "))";
    case FieldKind::monogenic: return "Q[t]/(" + poly_to_string(minpoly_) + ")";
    }
    return "?";
}

FieldPtr make_field(const FieldDescriptor& desc) {
    std::shared_ptr<Field> field(new Field());
    field->descriptor_ = desc;
    std::vector<Integer>& f = field->minpoly_;

    switch (desc.kind) {
    case FieldKind::rational:
        f = {0, 1};
        field->labels_ = {"1"};
        break;
    case FieldKind::quadratic: {
        const long d = desc.d;
        if (d == 0 || d == 1) throw FieldError("quadratic field needs d != 0, 1");
        if (!is_squarefree(d)) throw FieldError("quadratic field needs squarefree d, got " + std::to_string(d));
        if (((d % 4) + 4) % 4 == 1) {
            f = {Integer((1 - d) / 4), -1, 1};
            field->labels_ = {"1", "(1+sqrt(" + std::to_string(d) + "))/2"};
        } else {
            f = {Integer(-d), 0, 1};
            field->labels_ = {"1", "sqrt(" + std::to_string(d) + ")"};
        }
        if (!on_class_number_one_whitelist(d))
            field->warnings_.push_back("Q(sqrt(" + std::to_string(d) +
                                       ")) is not on the class-number-one whitelist; the density formula assumes O is a PID");
        break;
    }
    case FieldKind::monogenic: {
        f = desc.minpoly;
        if (f.size() < 2) throw FieldError("monogenic field needs a minimal polynomial of degree >= 1");
        if (f.back() != 1) throw FieldError("minimal polynomial " + poly_to_string(f) + " is not monic");
        for (std::size_t i = 0; i + 1 < f.size(); ++i)
            field->labels_.push_back(i == 0 ? "1" : (i == 1 ? "t" : "t^" + std::to_string(i)));
        field->warnings_.push_back("class number of " + poly_to_string(f) +
                                   " is not checked; the density formula assumes O is a PID");
        break;
    }
    }

    const std::size_t n = f.size() - 1;
    field->n_ = n;

    // coordinates of t^k for k <= 2n-2 in the power basis
    std::vector<std::vector<Integer>> powers;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Integer> v(n);
        v[k] = 1;
        powers.push_back(std::move(v));
    }
    while (powers.size() < 2 * n - 1) {
        const auto& prev = powers.back();
        std::vector<Integer> v(n);
        for (std::size_t i = 0; i + 1 < n; ++i) v[i + 1] = prev[i];
        const Integer top = prev[n - 1];
        for (std::size_t i = 0; i < n; ++i) v[i] -= top * f[i];
        powers.push_back(std::move(v));
    }
    field->tensor_.assign(n * n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) field->tensor_[(i * n + j) * n + k] = powers[i + j][k];

    IntMatrix trace_form(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            trace_form(i, j) = field->trace(field->mul(field->basis_element(i), field->basis_element(j)));
    field->discriminant_ = determinant(trace_form);

    if (desc.kind == FieldKind::monogenic) check_irreducible(f, field->discriminant_);
    return field;
}

} // namespace visilat
