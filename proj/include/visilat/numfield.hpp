#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "visilat/integer.hpp"

namespace visilat {

enum class FieldKind { rational, quadratic, monogenic };

/// What the user asked for; make_field turns it into a validated Field.
struct FieldDescriptor {
    FieldKind kind = FieldKind::rational;
    long d = 0;                     // quadratic only
    std::vector<Integer> minpoly;   // monogenic only, constant term first, monic

    static FieldDescriptor rational() { return {}; }
    static FieldDescriptor quadratic(long d) { return {FieldKind::quadratic, d, {}}; }
    static FieldDescriptor monogenic(std::vector<Integer> poly) {
        return {FieldKind::monogenic, 0, std::move(poly)};
    }
};

/// Thrown when a field descriptor does not describe a supported number field.
class FieldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Element of O as integer coordinates over the integral basis.
struct AlgInt {
    std::vector<Integer> coords;

    AlgInt() = default;
    explicit AlgInt(std::vector<Integer> c) : coords(std::move(c)) {}

    std::size_t size() const { return coords.size(); }
    bool is_zero() const;

    friend bool operator==(const AlgInt&, const AlgInt&) = default;
    friend auto operator<=>(const AlgInt& a, const AlgInt& b) {
        return std::lexicographical_compare_three_way(
            a.coords.begin(), a.coords.end(), b.coords.begin(), b.coords.end(),
            [](const Integer& x, const Integer& y) {
                int c = cmp(x, y);
                return c < 0 ? std::strong_ordering::less
                             : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
            });
    }
};

/// A number field K together with the integral basis of O used for coordinates.
///
/// Every supported field has a power basis {1, t, ..., t^(n-1)} where t is a
/// root of `generator_minpoly()`: t = 0 for Q, t = sqrt(d) or (1+sqrt(d))/2 for
/// quadratic fields, and the given root for monogenic fields. Immutable.
class Field : public std::enable_shared_from_this<Field> {
public:
    FieldKind kind() const { return descriptor_.kind; }
    const FieldDescriptor& descriptor() const { return descriptor_; }
    std::size_t degree() const { return n_; }
    const std::vector<std::string>& basis_labels() const { return labels_; }
    const Integer& discriminant() const { return discriminant_; }
    /// Monic minimal polynomial of the power-basis generator, constant term first.
    const std::vector<Integer>& generator_minpoly() const { return minpoly_; }
    /// e_i * e_j = sum_k T(i,j,k) e_k
    const Integer& tensor(std::size_t i, std::size_t j, std::size_t k) const {
        return tensor_[(i * n_ + j) * n_ + k];
    }
    /// Non-fatal notes produced during construction (e.g. class number unknown).
    const std::vector<std::string>& warnings() const { return warnings_; }
    std::string name() const;

    AlgInt zero() const { return AlgInt(std::vector<Integer>(n_)); }
    AlgInt one() const;
    AlgInt from_integer(const Integer& v) const;
    AlgInt basis_element(std::size_t i) const;
    AlgInt element(std::vector<Integer> coords) const;

    AlgInt add(const AlgInt& a, const AlgInt& b) const;
    AlgInt sub(const AlgInt& a, const AlgInt& b) const;
    AlgInt neg(const AlgInt& a) const;
    AlgInt mul(const AlgInt& a, const AlgInt& b) const;

    /// Matrix of x -> a*x; row i holds the coordinates of a*e_i.
    IntMatrix multiplication_matrix(const AlgInt& a) const;
    /// Signed field norm, det of the multiplication matrix.
    Integer norm(const AlgInt& a) const;
    Integer trace(const AlgInt& a) const;

    /// Horner evaluation of an integer polynomial (constant first) at the generator.
    AlgInt eval_at_generator(std::span<const Integer> poly) const;

    friend bool operator==(const Field& a, const Field& b) { return a.minpoly_ == b.minpoly_; }

private:
    friend std::shared_ptr<const Field> make_field(const FieldDescriptor&);
    Field() = default;
    void check_same(const AlgInt& a) const;

    FieldDescriptor descriptor_;
    std::size_t n_ = 1;
    std::vector<std::string> labels_;
    std::vector<Integer> minpoly_;
    std::vector<Integer> tensor_;
    Integer discriminant_;
    std::vector<std::string> warnings_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Builds and validates a field. Throws FieldError for non-squarefree or
/// trivial d, and for minimal polynomials that are not monic, reducible, or
/// cannot be certified irreducible.
FieldPtr make_field(const FieldDescriptor& desc);

/// Quadratic d for which O is known to be a PID and is accepted without warning.
bool on_class_number_one_whitelist(long d);

bool is_squarefree(long d);

} // namespace visilat
