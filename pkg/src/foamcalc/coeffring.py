"""Exact graded coefficient arithmetic: beta-polynomials and truncated x-series.

Coefficients live in a graded polynomial ring with generators

    b(k,l)  of degree -2(k+l)   (deformation parameters, k+l >= 1)
    cp(k)   of degree -2k       (rational-mode log coefficients, k >= 1)
    sym(name, d)                (ad-hoc named generators, e.g. a single beta)

over Z (or Q when a Fraction ever enters).  Series variables x_1..x_n all
have degree 2.  Everything is sparse and exact; there are no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction


# ---------------------------------------------------------------------------
# symbols

def beta(k, l):
    """Deformation coefficient of x^k y^l in p(x,y); degree -2(k+l)."""
    if k < 0 or l < 0 or (k, l) == (0, 0):
        raise ValueError("beta indices must be >= 0 and not (0,0)")
    return ("b", k, l)


def cp(k):
    """Degree -2k rational-mode generator (k-th log numerator class)."""
    if k < 1:
        raise ValueError("cp index must be >= 1")
    return ("l", k)


def sym(name, degree):
    """A named generator with an explicit even degree."""
    return ("g", name, degree)


def symbol_degree(s):
    tag = s[0]
    if tag == "b":
        return -2 * (s[1] + s[2])
    if tag == "l":
        return -2 * s[1]
    if tag == "g":
        return s[2]
    raise ValueError(f"unknown symbol {s!r}")


def symbol_str(s):
    tag = s[0]
    if tag == "b":
        return f"b{s[1]}{s[2]}" if s[1] < 10 and s[2] < 10 else f"b({s[1]},{s[2]})"
    if tag == "l":
        return f"cp{s[1]}"
    return str(s[1])


# ---------------------------------------------------------------------------
# coefficient polynomials

def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for s, e in m2:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items()))


def _mono_degree(m):
    return sum(symbol_degree(s) * e for s, e in m)


class CoeffPoly:
    """Sparse polynomial in graded symbols with integer/Fraction coefficients.

    terms maps a monomial (sorted tuple of (symbol, exponent) pairs) to a
    nonzero coefficient.  The empty tuple is the constant monomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms or {}

    @staticmethod
    def const(c):
        return CoeffPoly({(): c} if c else {})

    @staticmethod
    def gen(symbol, c=1):
        return CoeffPoly({((symbol, 1),): c} if c else {})

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self):
        return self.terms.get((), 0)

    def __eq__(self, other):
        return isinstance(other, CoeffPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return CoeffPoly(out)

    def __neg__(self):
        return CoeffPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return CoeffPoly()
            return CoeffPoly({m: c * other for m, c in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return CoeffPoly(out)

    __rmul__ = __mul__

    def scale_div(self, k):
        """Exact division by the scalar k, promoting to Fraction as needed."""
        out = {}
        for m, c in self.terms.items():
            if isinstance(c, int) and c % k == 0:
                out[m] = c // k
            else:
                out[m] = Fraction(c, 1) / k
        return CoeffPoly(out)

    def degree_components(self):
        """Split into {degree: CoeffPoly}, exact by symbol grading."""
        comps = {}
        for m, c in self.terms.items():
            d = _mono_degree(m)
            comps.setdefault(d, {})[m] = c
        return {d: CoeffPoly(t) for d, t in comps.items()}

    def is_homogeneous(self, degree=None):
        comps = self.degree_components()
        if not comps:
            return True
        if len(comps) > 1:
            return False
        return degree is None or next(iter(comps)) == degree

    def evaluate(self, values):
        """Substitute integers/Fractions for symbols; unassigned -> 0."""
        total = 0
        for m, c in self.terms.items():
            v = c
            for s, e in m:
                base = values.get(s, 0)
                if base == 0:
                    v = 0
                    break
                v *= base ** e
            total += v
        return total

    def map_symbols(self, f):
        """Rename symbols by f (must preserve degrees for graded use)."""
        out = CoeffPoly()
        for m, c in self.terms.items():
            nm = tuple(sorted((f(s), e) for s, e in m))
            out += CoeffPoly({nm: c})
        return out

    def sort_key_terms(self):
        return sorted(self.terms.items(), key=lambda it: (-_mono_degree(it[0]), it[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sort_key_terms():
            factors = [symbol_str(s) + (f"^{e}" if e > 1 else "") for s, e in m]
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        s = " + ".join(parts).replace("+ -", "- ")
        return s

    __repr__ = __str__

    def to_json(self):
        return sorted([[[list(s), e] for s, e in m], str(c)]
                      for m, c in self.terms.items())


CP_ZERO = CoeffPoly()
CP_ONE = CoeffPoly.const(1)


# ---------------------------------------------------------------------------
# truncated series

class NotDivisible(Exception):
    pass


class NotSymmetric(Exception):
    pass


class DimensionMismatch(Exception):
    pass


class TruncSeries:
    """Multivariate power series, truncated by total x-exponent.

    nvars    number of x-variables (x_1..x_n, each of degree 2)
    trunc    hard truncation bound on total exponent
    valid    exponent degree up to which coefficients are reliable;
             divisions reduce it, multiplication takes the min
    terms    sparse map exponent-tuple -> CoeffPoly
    """

    __slots__ = ("nvars", "trunc", "valid", "terms")

    def __init__(self, nvars, trunc, valid=None, terms=None):
        self.nvars = nvars
        self.trunc = trunc
        self.valid = trunc if valid is None else min(valid, trunc)
        self.terms = terms or {}

    # -- constructors

    @staticmethod
    def zero(nvars, trunc, valid=None):
        return TruncSeries(nvars, trunc, valid)

    @staticmethod
    def const(nvars, trunc, c, valid=None):
        p = c if isinstance(c, CoeffPoly) else CoeffPoly.const(c)
        t = {(0,) * nvars: p} if not p.is_zero() else {}
        return TruncSeries(nvars, trunc, valid, t)

    @staticmethod
    def one(nvars, trunc):
        return TruncSeries.const(nvars, trunc, 1)

    @staticmethod
    def x(nvars, trunc, i, power=1):
        """The monomial x_i^power (1-based index)."""
        e = [0] * nvars
        e[i - 1] = power
        if power > trunc:
            return TruncSeries.zero(nvars, trunc)
        return TruncSeries(nvars, trunc, None, {tuple(e): CP_ONE})

    def clone_shape(self, terms, valid=None):
        return TruncSeries(self.nvars, self.trunc,
                           self.valid if valid is None else valid, terms)

    # -- bookkeeping

    def _check(self, other):
        if self.nvars != other.nvars or self.trunc != other.trunc:
            raise DimensionMismatch(
                f"series shape ({self.nvars},{self.trunc}) vs "
                f"({other.nvars},{other.trunc})")

    def prune(self):
        for e in [e for e, c in self.terms.items() if c.is_zero()]:
            del self.terms[e]
        return self

    def is_zero(self, up_to_valid=True):
        bound = self.valid if up_to_valid else self.trunc
        return all(c.is_zero() or sum(e) > bound for e, c in self.terms.items())

    def coeff(self, exps):
        return self.terms.get(tuple(exps), CP_ZERO)

    def __eq__(self, other):
        """Equality of reliable parts (up to min valid degree)."""
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        v = min(self.valid, other.valid)
        for e in set(self.terms) | set(other.terms):
            if sum(e) <= v and self.coeff(e) != other.coeff(e):
                return False
        return True

    # -- ring operations

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, CP_ZERO) + c
            if v.is_zero():
                out.pop(e, None)
            else:
                out[e] = v
        return TruncSeries(self.nvars, self.trunc,
                           min(self.valid, other.valid), out)

    def __neg__(self):
        return self.clone_shape({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        p = c if isinstance(c, CoeffPoly) else CoeffPoly.const(c)
        if p.is_zero():
            return TruncSeries.zero(self.nvars, self.trunc, self.valid)
        out = {}
        for e, t in self.terms.items():
            v = t * p
            if not v.is_zero():
                out[e] = v
        return self.clone_shape(out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CoeffPoly)):
            return self.scale(other)
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > self.trunc:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, CP_ZERO) + c1 * c2
                if v.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = v
        return TruncSeries(self.nvars, self.trunc,
                           min(self.valid, other.valid), out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.invert() ** (-n)
        r = TruncSeries.one(self.nvars, self.trunc)
        r.valid = self.valid if n else r.valid
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b if n > 1 else b
            n >>= 1
        return r

    def invert(self):
        """Inverse of a series with unit constant term, degree by degree."""
        c0 = self.coeff((0,) * self.nvars)
        if not c0.is_constant() or c0.constant_value() == 0:
            raise NotDivisible("constant term is not a unit")
        u = c0.constant_value()
        if u in (1, -1):
            inv0 = u
        else:
            inv0 = Fraction(1, u)
        by_deg = {}
        for e, c in self.terms.items():
            by_deg.setdefault(sum(e), {})[e] = c
        out = {(0,) * self.nvars: CoeffPoly.const(inv0)}
        for d in range(1, self.trunc + 1):
            # g_d = -inv0 * sum_{k=1..d} f_k * g_{d-k}
            acc = {}
            for k, fk in by_deg.items():
                if k == 0 or k > d:
                    continue
                for e1, c1 in fk.items():
                    for e2, c2 in list(out.items()):
                        if sum(e2) != d - k:
                            continue
                        e = tuple(a + b for a, b in zip(e1, e2))
                        v = acc.get(e, CP_ZERO) + c1 * c2
                        if v.is_zero():
                            acc.pop(e, None)
                        else:
                            acc[e] = v
            for e, c in acc.items():
                v = c * (-inv0)
                if not v.is_zero():
                    out[e] = out.get(e, CP_ZERO) + v
                    if out[e].is_zero():
                        del out[e]
        return TruncSeries(self.nvars, self.trunc, self.valid, out)

    # -- structure maps

    def permute_vars(self, perm):
        """perm maps old 1-based index -> new 1-based index."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.nvars
            for i, exp in enumerate(e):
                ne[perm[i + 1] - 1] = exp
            out[tuple(ne)] = c
        return self.clone_shape(out)

    def swap(self, i, j):
        perm = {k: k for k in range(1, self.nvars + 1)}
        perm[i], perm[j] = j, i
        return self.permute_vars(perm)

    def is_symmetric(self, i=1, j=2):
        return self == self.swap(i, j)

    def is_symmetric_all(self):
        from itertools import permutations
        ident = tuple(range(1, self.nvars + 1))
        for p in permutations(range(1, self.nvars + 1)):
            if p == ident:
                continue
            if not (self == self.permute_vars(dict(zip(ident, p)))):
                return False
        return True

    def substitute_var(self, i, g):
        """Substitute the 1-variable-supported series g for x_i (g(0)=0)."""
        out = TruncSeries.zero(self.nvars, self.trunc, min(self.valid, g.valid))
        pow_cache = {0: TruncSeries.one(self.nvars, self.trunc)}

        def gpow(k):
            if k not in pow_cache:
                pow_cache[k] = gpow(k - 1) * g
            return pow_cache[k]

        for e, c in self.terms.items():
            k = e[i - 1]
            rest = list(e)
            rest[i - 1] = 0
            base = TruncSeries(self.nvars, self.trunc, self.trunc,
                               {tuple(rest): c})
            out = out + base * gpow(k)
        return out

    def derivative(self, i):
        out = {}
        for e, c in self.terms.items():
            k = e[i - 1]
            if k == 0:
                continue
            ne = list(e)
            ne[i - 1] = k - 1
            v = out.get(tuple(ne), CP_ZERO) + c * k
            if not v.is_zero():
                out[tuple(ne)] = v
        # derivative of a degree-d-reliable series is reliable to d-1
        return TruncSeries(self.nvars, self.trunc, self.valid - 1, out)

    def integrate(self, i):
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i - 1] += 1
            if sum(ne) > self.trunc:
                continue
            out[tuple(ne)] = c.scale_div(ne[i - 1])
        return TruncSeries(self.nvars, self.trunc, min(self.valid + 1, self.trunc), out)

    def truncate_valid(self, v):
        return TruncSeries(self.nvars, self.trunc, min(v, self.valid),
                           dict(self.terms))

    def drop_unreliable(self):
        return self.clone_shape(
            {e: c for e, c in self.terms.items() if sum(e) <= self.valid})

    # -- division and symmetric rewriting

    def divide_exact(self, i, j, k=1):
        """Exact division by (x_i - x_j)^k; raises NotDivisible on remainder.

        The quotient is reliable to valid - k.
        """
        if k < 1:
            raise ValueError("multiplicity must be >= 1")
        s = self
        for _ in range(k):
            s = s._divide_once(i, j)
        return s

    def _divide_once(self, i, j):
        # organize by x_i exponent: s = sum_m c_m(x_others) x_i^m,
        # synthetic division by (x_i - x_j): q_{m-1} = c_m + x_j * q_m.
        by_m = {}
        top = 0
        for e, c in self.terms.items():
            m = e[i - 1]
            rest = list(e)
            rest[i - 1] = 0
            by_m.setdefault(m, {})[tuple(rest)] = c
            top = max(top, m)
        q = {}       # exponent tuple (with x_i slot) -> CoeffPoly
        qm = {}      # current q_m as {rest-tuple: coeff}
        for m in range(top, 0, -1):
            nxt = {}
            for rest, c in by_m.get(m, {}).items():
                nxt[rest] = nxt.get(rest, CP_ZERO) + c
            for rest, c in qm.items():
                r2 = list(rest)
                r2[j - 1] += 1
                if sum(r2) + m - 1 > self.trunc:
                    continue
                r2 = tuple(r2)
                nxt[r2] = nxt.get(r2, CP_ZERO) + c
            qm = {r: c for r, c in nxt.items() if not c.is_zero()}
            for rest, c in qm.items():
                e = list(rest)
                e[i - 1] = m - 1
                q[tuple(e)] = c
        # remainder = c_0 + x_j * q_0
        rem = {}
        for rest, c in by_m.get(0, {}).items():
            rem[rest] = rem.get(rest, CP_ZERO) + c
        for rest, c in qm.items():
            r2 = list(rest)
            r2[j - 1] += 1
            if sum(r2) > self.trunc:
                continue
            r2 = tuple(r2)
            rem[r2] = rem.get(r2, CP_ZERO) + c
        for e, c in rem.items():
            if sum(e) <= self.valid and not c.is_zero():
                raise NotDivisible(
                    f"remainder {c} at x-exponents {e} dividing by (x{i} - x{j})")
        return TruncSeries(self.nvars, self.trunc, self.valid - 1, q)

    def to_elementary_symmetric(self):
        """Rewrite a symmetric 2-variable series in E1=x1+x2, E2=x1*x2.

        Returns {(a, b): CoeffPoly} for E1^a E2^b, covering exponent degrees
        up to valid.  Raises NotSymmetric if the reliable part is asymmetric.
        """
        if self.nvars != 2:
            raise DimensionMismatch("elementary rewriting needs 2 variables")
        if not self.is_symmetric():
            raise NotSymmetric("series is not symmetric in x1, x2")
        work = {e: c for e, c in self.terms.items() if sum(e) <= self.valid}
        out = {}
        # greedy: repeatedly strip the lex-leading monomial with d1 >= d2
        while True:
            lead = None
            for (d1, d2), c in work.items():
                if d1 >= d2 and not c.is_zero():
                    if lead is None or (d1, d2) > lead:
                        lead = (d1, d2)
            if lead is None:
                break
            d1, d2 = lead
            c = work[lead]
            a, b = d1 - d2, d2
            out[(a, b)] = out.get((a, b), CP_ZERO) + c
            # subtract c * (x1+x2)^a (x1 x2)^b
            for t in range(a + 1):
                from math import comb
                e = (t + b, a - t + b)
                v = work.get(e, CP_ZERO) - c * comb(a, t)
                if v.is_zero():
                    work.pop(e, None)
                else:
                    work[e] = v
        return {k: v for k, v in out.items() if not v.is_zero()}

    # -- grading

    def homogeneous_degree(self):
        """Total degree if homogeneous (x-degree 2 each + coefficient degree),
        None for 0, raises ValueError otherwise.  Only reliable terms count."""
        degs = set()
        for e, c in self.terms.items():
            if sum(e) > self.valid:
                continue
            for d, comp in c.degree_components().items():
                if not comp.is_zero():
                    degs.add(2 * sum(e) + d)
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def evaluate_coeffs(self, values):
        """Specialize all symbols to numbers; returns {exps: number}."""
        out = {}
        for e, c in self.terms.items():
            v = c.evaluate(values)
            if v:
                out[e] = v
        return out

    # -- presentation

    def sorted_terms(self):
        return sorted(((e, c) for e, c in self.terms.items()),
                      key=lambda it: (sum(it[0]), it[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            xs = "*".join(f"x{i+1}" + (f"^{k}" if k > 1 else "")
                          for i, k in enumerate(e) if k)
            cs = str(c)
            if xs:
                cs = f"({cs})*{xs}" if ("+" in cs or "- " in cs) else \
                    (xs if cs == "1" else f"-{xs}" if cs == "-1" else f"{cs}*{xs}")
            parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ") + f"  [valid<={self.valid}]"

    __repr__ = __str__

    def to_json(self):
        return {
            "nvars": self.nvars,
            "trunc": self.trunc,
            "valid": self.valid,
            "terms": sorted(
                [[list(e), str(c)] for e, c in self.terms.items() if not c.is_zero()]),
        }


# ---------------------------------------------------------------------------
# deformation series p(x_i, x_j)

def p_generic(nvars, trunc, i, j, symmetric=False):
    """The universal p(x_i,x_j) = 1 + sum b(k,l) x_i^k x_j^l, all b symbolic.

    Only b(k,l) with k+l <= trunc can contribute.  In the symmetric case
    b(l,k) is identified with b(k,l) for k <= l.
    """
    terms = {(0,) * nvars: CP_ONE}
    for d in range(1, trunc + 1):
        for k in range(d + 1):
            l = d - k
            e = [0] * nvars
            e[i - 1] += k
            e[j - 1] += l
            s = beta(min(k, l), max(k, l)) if symmetric else beta(k, l)
            key = tuple(e)
            cur = terms.get(key, CP_ZERO) + CoeffPoly.gen(s)
            terms[key] = cur
    return TruncSeries(nvars, trunc, None, terms)


def p_from_betas(nvars, trunc, i, j, betas):
    """p(x_i,x_j) with numeric coefficients {(k,l): int}."""
    terms = {(0,) * nvars: CP_ONE}
    for (k, l), v in betas.items():
        if not v or k + l > trunc:
            continue
        e = [0] * nvars
        e[i - 1] += k
        e[j - 1] += l
        key = tuple(e)
        cur = terms.get(key, CP_ZERO) + CoeffPoly.const(v)
        if cur.is_zero():
            terms.pop(key, None)
        else:
            terms[key] = cur
    return TruncSeries(nvars, trunc, None, terms)


def elementary_symmetric(nvars, trunc, k):
    """e_k(x_1..x_n) as a TruncSeries."""
    from itertools import combinations
    terms = {}
    for sub in combinations(range(nvars), k):
        e = [0] * nvars
        for i in sub:
            e[i] = 1
        terms[tuple(e)] = CP_ONE
    if k == 0:
        terms = {(0,) * nvars: CP_ONE}
    return TruncSeries(nvars, trunc, None, terms)


def complete_homogeneous(nvars, trunc, k):
    """h_k(x_1..x_n)."""
    from itertools import combinations_with_replacement
    terms = {}
    for sub in combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for i in sub:
            e[i] += 1
        key = tuple(e)
        terms[key] = terms.get(key, CP_ZERO) + CP_ONE
    if k == 0:
        terms = {(0,) * nvars: CP_ONE}
    return TruncSeries(nvars, trunc, None, terms)
