#ifndef STK_POLYNOMIAL_HPP
#define STK_POLYNOMIAL_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stk/rational.hpp"

namespace stk {

using LabelId = int;

/// Power product of label indeterminates; entries sorted by label id,
/// exponents strictly positive. The empty monomial is 1.
class Monomial {
public:
    Monomial() = default;
    static Monomial variable(LabelId id);
    /// From unsorted factors with multiplicity.
    static Monomial from_factors(std::vector<LabelId> factors);

    const std::vector<std::pair<LabelId, int>>& powers() const { return powers_; }
    int degree() const;
    friend Monomial operator*(const Monomial& a, const Monomial& b);
    auto operator<=>(const Monomial&) const = default;

private:
    std::vector<std::pair<LabelId, int>> powers_;
};

/// Sparse multivariate polynomial with exact integer coefficients, kept in
/// canonical form (terms ordered by monomial, no zero coefficients), so that
/// operator== is structural ring equality.
class Poly {
public:
    Poly() = default;  // zero
    static Poly constant(std::int64_t c);
    static Poly variable(LabelId id);
    static Poly term(Monomial m, std::int64_t c);

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    int degree() const;
    const std::vector<std::pair<Monomial, std::int64_t>>& terms() const { return terms_; }

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    bool operator==(const Poly&) const = default;

    /// Exact evaluation; throws PreconditionError on a label without a value.
    Rat evaluate(const std::map<LabelId, Rat>& point) const;

    /// Human-readable form; label ids rendered through `name`.
    std::string to_string(const std::function<std::string(LabelId)>& name) const;

private:
    explicit Poly(std::vector<std::pair<Monomial, std::int64_t>> terms)
        : terms_(std::move(terms)) {}

    std::vector<std::pair<Monomial, std::int64_t>> terms_;
};

}  // namespace stk

#endif
