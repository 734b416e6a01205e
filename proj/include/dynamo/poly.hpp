#pragma once

#include <vector>

#include "dynamo/sphere.hpp"

namespace dynamo {

// Dense polynomial / truncated power series helpers over complex doubles.
// Coefficient vectors are ascending: p[k] is the coefficient of z^k.
using Poly = std::vector<cplx>;

int degree(const Poly& p, double tol = 0.0);
Poly trim(Poly p, double tol = 1e-13);

cplx poly_eval(const Poly& p, cplx z);
// Evaluates p and p' in one pass.
std::pair<cplx, cplx> poly_eval_d(const Poly& p, cplx z);
Poly poly_derive(const Poly& p);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, cplx s);
// p(z + c) as a polynomial in z (Taylor shift).
Poly poly_shift(const Poly& p, cplx c);
// Coefficient reversal: z^n p(1/z) for n = p.size()-1.
Poly poly_reverse(const Poly& p);

// --- truncated power series (length K, index = power of t) ---

Poly series_mul(const Poly& a, const Poly& b, int K);
Poly series_pow(const Poly& a, int e, int K);
// 1/a, requires a[0] != 0.
Poly series_inv(const Poly& a, int K);
Poly series_div(const Poly& a, const Poly& b, int K);
// Composition a(b(t)); requires b[0] == 0.
Poly series_compose(const Poly& a, const Poly& b, int K);
// d-th root of a series of the form a = a_d t^d (1 + ...): returns s with
// s^d = a and s = c t (1+...), c the principal d-th root of a_d.
Poly series_root(const Poly& a, int d, int K);
// Reversion: given s with s[0]=0, s[1]!=0, returns r with s(r(t)) = t.
Poly series_revert(const Poly& s, int K);
// Solve Q(C(t)) = S(t) for Q, where C has exact order d (C = c_d t^d + ...,
// c_d != 0) and S is a series supported on orders >= d. Used to push a jet
// through a locally d-to-1 map.
Poly series_decompose(const Poly& S, const Poly& C, int d, int K);

}  // namespace dynamo
