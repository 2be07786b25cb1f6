#pragma once

#include <map>
#include <random>
#include <vector>

#include "osculum/expr.hpp"

namespace osculum::testutil {

// A random polynomial together with its own coefficient map, so tests can
// check jet output against coefficients known independently of the jet code.
struct RandomPoly {
    Expr expr;
    std::map<std::vector<int>, Rat> coeffs; // exponent vector -> coefficient
};

inline Expr monomial_expr(const std::vector<int>& exps, const Rat& c) {
    Expr t = Expr::constant(c);
    for (std::size_t i = 0; i < exps.size(); ++i)
        if (exps[i] > 0) t = t * pow(Expr::variable(static_cast<int>(i)), exps[i]);
    return t;
}

inline Expr poly_expr(int p, const std::map<std::vector<int>, Rat>& coeffs) {
    Expr acc = Expr::constant(0);
    (void)p;
    for (const auto& [exps, c] : coeffs)
        if (c != 0) acc = acc + monomial_expr(exps, c);
    return acc;
}

inline RandomPoly random_poly(std::mt19937_64& rng, int p, int max_deg, int n_terms,
                              int min_deg = 0) {
    std::uniform_int_distribution<int> deg_dist(min_deg, max_deg);
    std::uniform_int_distribution<int> num_dist(-9, 9);
    std::uniform_int_distribution<int> den_dist(1, 4);
    std::map<std::vector<int>, Rat> coeffs;
    for (int t = 0; t < n_terms; ++t) {
        int d = deg_dist(rng);
        std::vector<int> exps(p, 0);
        for (int j = 0; j < d; ++j) exps[rng() % p] += 1;
        Rat c(num_dist(rng), den_dist(rng));
        coeffs[exps] += c;
    }
    for (auto it = coeffs.begin(); it != coeffs.end();)
        it = it->second == 0 ? coeffs.erase(it) : std::next(it);
    return {poly_expr(p, coeffs), coeffs};
}

} // namespace osculum::testutil
