"""Sparse multivariate polynomials over a finite field.

A polynomial in m variables is a dict mapping exponent tuples of length m to
nonzero coefficient codes of the base field.  Everything here is exact; the
only nontrivial algorithm is the bivariate gcd, done by a primitive
pseudo-remainder sequence over K[t][u].
"""

from __future__ import annotations

from .galois import GaloisField

Exp = tuple[int, ...]
Poly = dict[Exp, int]


def p_zero() -> Poly:
    return {}


def p_const(m: int, c: int) -> Poly:
    return {} if c == 0 else {(0,) * m: c}


def p_var(m: int, i: int) -> Poly:
    e = [0] * m
    e[i] = 1
    return {tuple(e): 1}


def p_is_zero(f: Poly) -> bool:
    return not f


def p_key(f: Poly):
    return tuple(sorted(f.items()))


def p_total_degree(f: Poly) -> int:
    return max((sum(e) for e in f), default=-1)


def grlex(e: Exp):
    return (sum(e), e)


def p_lead(f: Poly) -> Exp:
    return max(f, key=grlex)


def p_lc(f: Poly) -> int:
    return f[p_lead(f)]


def p_add(K: GaloisField, f: Poly, g: Poly) -> Poly:
    out = dict(f)
    for e, c in g.items():
        s = K.add_code(out.get(e, 0), c)
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def p_neg(K: GaloisField, f: Poly) -> Poly:
    if K.p == 2:
        return dict(f)
    return {e: K.neg_code(c) for e, c in f.items()}


def p_sub(K: GaloisField, f: Poly, g: Poly) -> Poly:
    return p_add(K, f, p_neg(K, g))


def p_scale(K: GaloisField, f: Poly, c: int) -> Poly:
    if c == 0:
        return {}
    if c == 1:
        return dict(f)
    return {e: K.mul_code(v, c) for e, v in f.items()}


def p_mul(K: GaloisField, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return {}
    if len(f) > len(g):
        f, g = g, f
    out: Poly = {}
    if K.q == 2:
        # coefficients are all 1: convolution is a symmetric difference
        for e1 in f:
            for e2 in g:
                e = tuple(a + b for a, b in zip(e1, e2))
                if e in out:
                    del out[e]
                else:
                    out[e] = 1
        return out
    add, mul = K.add_code, K.mul_code
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = add(out.get(e, 0), mul(c1, c2))
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def p_pow(K: GaloisField, f: Poly, n: int) -> Poly:
    m = len(next(iter(f))) if f else 1
    out = p_const(m, 1)
    base = f
    while n:
        if n & 1:
            out = p_mul(K, out, base)
        base = p_mul(K, base, base)
        n >>= 1
    return out


def p_monic(K: GaloisField, f: Poly) -> Poly:
    lc = p_lc(f)
    if lc == 1:
        return f
    return p_scale(K, f, K.inv_code(lc))


def p_exact_div(K: GaloisField, f: Poly, g: Poly) -> Poly:
    """Quotient f/g, assuming g divides f exactly."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    out: Poly = {}
    rem = dict(f)
    glead = p_lead(g)
    glc_inv = K.inv_code(g[glead])
    while rem:
        e = p_lead(rem)
        qe = tuple(a - b for a, b in zip(e, glead))
        if any(x < 0 for x in qe):
            raise ArithmeticError("inexact polynomial division")
        qc = K.mul_code(rem[e], glc_inv)
        out[qe] = qc
        rem = p_sub(K, rem, p_mul(K, {qe: qc}, g))
    return out


# -- univariate helpers (exponent tuples of length 1) -------------------------


def u_deg(f: Poly) -> int:
    return max((e[0] for e in f), default=-1)


def u_divmod(K: GaloisField, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q: Poly = {}
    r = dict(f)
    dg = u_deg(g)
    inv = K.inv_code(p_lc(g))
    while r and u_deg(r) >= dg:
        d = u_deg(r)
        c = K.mul_code(r[(d,)], inv)
        q[(d - dg,)] = c
        r = p_sub(K, r, p_mul(K, {(d - dg,): c}, g))
    return q, r


def u_gcd(K: GaloisField, f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, u_divmod(K, f, g)[1]
    return p_monic(K, f) if f else {}


# -- bivariate gcd by primitive PRS over K[t][u] -------------------------------


def _to_rec(f: Poly) -> dict[int, Poly]:
    """View f in K[t, u] as a polynomial in u with coefficients in K[t]."""
    out: dict[int, Poly] = {}
    for (et, eu), c in f.items():
        out.setdefault(eu, {})[(et,)] = c
    return out


def _from_rec(rec: dict[int, Poly]) -> Poly:
    out: Poly = {}
    for eu, coef in rec.items():
        for (et,), c in coef.items():
            out[(et, eu)] = c
    return out


def _lift_t(f1: Poly) -> Poly:
    """Embed a univariate polynomial in t into K[t, u]."""
    return {(e[0], 0): c for e, c in f1.items()}


def _content_t(K: GaloisField, f: Poly) -> Poly:
    """Monic gcd in K[t] of the u-coefficients of f."""
    rec = _to_rec(f)
    g: Poly = {}
    for coef in rec.values():
        g = u_gcd(K, g, coef)
        if u_deg(g) == 0:
            break
    return g


def _rec_deg_u(f: Poly) -> int:
    return max((e[1] for e in f), default=-1)


def _rec_lc_u(f: Poly) -> Poly:
    d = _rec_deg_u(f)
    return {(et,): c for (et, eu), c in f.items() if eu == d}


def _pseudo_rem_u(K: GaloisField, f: Poly, g: Poly) -> Poly:
    """Pseudo-remainder of f by g with respect to u, coefficients in K[t]."""
    dg = _rec_deg_u(g)
    lg = _lift_t(_rec_lc_u(g))
    r = dict(f)
    while r and _rec_deg_u(r) >= dg:
        dr = _rec_deg_u(r)
        lr = _lift_t(_rec_lc_u(r))
        shift = {(0, dr - dg): 1}
        r = p_sub(K, p_mul(K, lg, r), p_mul(K, p_mul(K, lr, shift), g))
    return r


def _primitive_part(K: GaloisField, f: Poly) -> Poly:
    cont = _content_t(K, f)
    if u_deg(cont) <= 0:
        return f
    return p_exact_div(K, f, _lift_t(cont))


def _monomial_content(f: Poly) -> Exp:
    mins = None
    for e in f:
        if mins is None:
            mins = list(e)
        else:
            mins = [min(a, b) for a, b in zip(mins, e)]
        if not any(mins):
            break
    return tuple(mins)


def _shift_down(f: Poly, shift: Exp) -> Poly:
    if not any(shift):
        return f
    return {tuple(a - b for a, b in zip(e, shift)): c for e, c in f.items()}


_GCD_CACHE: dict[tuple, Poly] = {}
_GCD_CACHE_LIMIT = 1 << 18


def p_gcd(K: GaloisField, f: Poly, g: Poly, m: int) -> Poly:
    """Monic gcd in K[t] or K[t, u]."""
    if not f:
        return p_monic(K, g) if g else {}
    if not g:
        return p_monic(K, f)
    # pull out the common monomial factor first; it settles monomial inputs
    sf = _monomial_content(f)
    sg = _monomial_content(g)
    shared = tuple(min(a, b) for a, b in zip(sf, sg))
    f = _shift_down(f, sf)
    g = _shift_down(g, sg)
    mono: Poly = {shared: 1}
    if len(f) == 1 or len(g) == 1:
        return mono  # a pure monomial is now a unit times 1
    if len(f) > len(g) or (len(f) == len(g) and p_key(f) > p_key(g)):
        f, g = g, f
    ck = (K.name, p_key(f), p_key(g))
    core = _GCD_CACHE.get(ck)
    if core is None:
        core = _p_gcd_core(K, f, g, m)
        if len(_GCD_CACHE) >= _GCD_CACHE_LIMIT:
            _GCD_CACHE.clear()
        _GCD_CACHE[ck] = core
    return p_monic(K, p_mul(K, mono, core)) if any(shared) else dict(core)


def _p_gcd_core(K: GaloisField, f: Poly, g: Poly, m: int) -> Poly:
    if m == 1:
        return u_gcd(K, f, g)
    fu = max(e[1] for e in f)
    gu = max(e[1] for e in g)
    if fu == 0 and gu == 0:
        # both live in K[t]
        lift = u_gcd(K, {(e[0],): c for e, c in f.items()},
                     {(e[0],): c for e, c in g.items()})
        return {(e[0], 0): c for e, c in lift.items()}
    ft = max(e[0] for e in f)
    gt = max(e[0] for e in g)
    if ft == 0 and gt == 0:
        lift = u_gcd(K, {(e[1],): c for e, c in f.items()},
                     {(e[1],): c for e, c in g.items()})
        return {(0, e[0]): c for e, c in lift.items()}
    if (fu == 0) != (gu == 0):
        # one factor is free of u: the gcd divides its t-content
        tonly, other = (f, g) if fu == 0 else (g, f)
        cont = _content_t(K, other)
        lift = u_gcd(K, {(e[0],): c for e, c in tonly.items()}, cont)
        return {(e[0], 0): c for e, c in lift.items()}
    cf = _content_t(K, f)
    cg = _content_t(K, g)
    c = u_gcd(K, cf, cg)
    a = _primitive_part(K, f)
    b = _primitive_part(K, g)
    if _rec_deg_u(a) < _rec_deg_u(b):
        a, b = b, a
    while b:
        r = _pseudo_rem_u(K, a, b)
        if not r:
            a = b
            break
        if _rec_deg_u(r) == 0:
            # nonzero remainder of u-degree 0: primitive parts are coprime in u
            a = p_const(2, 1)
            break
        a, b = b, _primitive_part(K, r)
    result = p_mul(K, _lift_t(c), _primitive_part(K, a))
    return p_monic(K, result)


def p_sqrt(K: GaloisField, f: Poly) -> Poly | None:
    """Exact square root in characteristic 2, or None."""
    if not f:
        return {}
    out: Poly = {}
    for e, c in f.items():
        if any(x % 2 for x in e):
            return None
        out[tuple(x // 2 for x in e)] = K.sqrt_code(c)
    return out


def p_str(K: GaloisField, f: Poly, variables: tuple[str, ...]) -> str:
    if not f:
        return "0"
    parts = []
    for e in sorted(f, key=grlex, reverse=True):
        c = f[e]
        factors = []
        coeff = GFElementStr(K, c)
        for name, d in zip(variables, e):
            if d == 0:
                continue
            factors.append(name if d == 1 else f"{name}^{d}")
        if not factors:
            parts.append(coeff)
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append("*".join([coeff] + factors))
    return "+".join(parts)


def GFElementStr(K: GaloisField, code: int) -> str:
    from .galois import GFElement

    s = str(GFElement(K, code))
    return f"({s})" if ("+" in s or "*" in s) else s
