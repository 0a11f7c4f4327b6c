"""The ground ring R = Z[E1, E2, rho0, rho1, rho^{+-1}] in normal form.

Elements are written on the basis  rho1^n1 rho0^n2 rho^n3 E1^a E2^b  with
n1 in {0,1}, n2 >= 0, n3 in Z, using the defining relation

    rho1^2 = E1 rho0 rho1 - E2 rho0^2 - rho.

Degrees: E1: 2, E2: 4, rho0: -2, rho1: 0, rho: 0.

The module also provides exact polynomials in x1, x2 with R coefficients
(XPoly), which is what the closed-foam evaluator sums before the final
division by powers of (x1 - x2), and the series expansion homomorphism
into truncated power series for cross-checking against the deformed
evaluation.
"""

from __future__ import annotations

from math import comb

from .coeffring import (CP_ONE, CP_ZERO, CoeffPoly, NotDivisible, TruncSeries)


class NonUnitRho(Exception):
    pass


# basis key: (n1, n2, n3, a, b)
_ONE = (0, 0, 0, 0, 0)


class GroundRingElem:
    """Exact element of R on the paper basis; terms maps key -> int."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms or {}

    # -- constructors

    @staticmethod
    def zero():
        return GroundRingElem()

    @staticmethod
    def const(c):
        return GroundRingElem({_ONE: c} if c else {})

    @staticmethod
    def gen(name, power=1):
        """One of 'E1','E2','rho0','rho1','rho' raised to a power."""
        slot = {"rho1": 0, "rho0": 1, "rho": 2, "E1": 3, "E2": 4}[name]
        key = [0, 0, 0, 0, 0]
        key[slot] = power
        if name == "rho1" and power not in (0, 1):
            e = GroundRingElem({tuple(key): 1})
            return e._reduce()
        if power < 0 and name != "rho":
            raise ValueError(f"negative power of {name} not in R")
        return GroundRingElem({tuple(key): 1})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = GroundRingElem.const(other)
        return isinstance(other, GroundRingElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic

    def __add__(self, other):
        if isinstance(other, int):
            other = GroundRingElem.const(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return GroundRingElem(out)

    __radd__ = __add__

    def __neg__(self):
        return GroundRingElem({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = GroundRingElem.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return GroundRingElem()
            return GroundRingElem({k: c * other for k, c in self.terms.items()})
        out = {}
        for (n1, n2, n3, a, b), c1 in self.terms.items():
            for (m1, m2, m3, p, q), c2 in other.terms.items():
                k = (n1 + m1, n2 + m2, n3 + m3, a + p, b + q)
                out[k] = out.get(k, 0) + c1 * c2
        return GroundRingElem({k: c for k, c in out.items() if c})._reduce()

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("use rho_shift for rho inverses")
        r = GroundRingElem.const(1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def rho_shift(self, k):
        """Multiply by rho^k (k may be negative)."""
        return GroundRingElem(
            {(n1, n2, n3 + k, a, b): c
             for (n1, n2, n3, a, b), c in self.terms.items()})

    def _reduce(self):
        """Rewrite every rho1^n1 with n1 >= 2 via the defining relation."""
        terms = dict(self.terms)
        while True:
            bad = [k for k in terms if k[0] >= 2]
            if not bad:
                break
            for k in bad:
                c = terms.pop(k)
                n1, n2, n3, a, b = k
                # rho1^2 = E1 rho0 rho1 - E2 rho0^2 - rho
                for key, mult in (
                        ((n1 - 1, n2 + 1, n3, a + 1, b), c),
                        ((n1 - 2, n2 + 2, n3, a, b + 1), -c),
                        ((n1 - 2, n2, n3 + 1, a, b), -c)):
                    v = terms.get(key, 0) + mult
                    if v:
                        terms[key] = v
                    else:
                        terms.pop(key, None)
        return GroundRingElem(terms)

    # -- structure

    def degree_components(self):
        comps = {}
        for k, c in self.terms.items():
            n1, n2, n3, a, b = k
            d = 2 * a + 4 * b - 2 * n2
            comps.setdefault(d, {})[k] = c
        return {d: GroundRingElem(t) for d, t in comps.items()}

    def homogeneous_degree(self):
        comps = self.degree_components()
        if not comps:
            return None
        if len(comps) > 1:
            raise ValueError(f"not homogeneous: {sorted(comps)}")
        return next(iter(comps))

    def is_unit_monomial(self):
        """True when +-rho^k (times nothing else): safely invertible in R."""
        if len(self.terms) != 1:
            return False
        (n1, n2, n3, a, b), c = next(iter(self.terms.items()))
        return (n1, n2, a, b) == (0, 0, 0, 0) and c in (1, -1)

    def unit_inverse(self):
        if not self.is_unit_monomial():
            raise NonUnitRho(f"{self} is not of the form +-rho^k")
        (n1, n2, n3, a, b), c = next(iter(self.terms.items()))
        return GroundRingElem({(0, 0, -n3, 0, 0): c})

    # -- maps out

    def expand_in_series(self, p12, p21):
        """Image in k[[x1,x2]] under rho0,rho1,rho -> their p-series values.

        One exact division by (x1-x2) occurs, so the result is reliable to
        p.valid - 1.
        """
        n, D = p12.nvars, p12.trunc
        x1 = TruncSeries.x(n, D, 1)
        x2 = TruncSeries.x(n, D, 2)
        rho0 = (p12 - p21).divide_exact(1, 2)
        rho1 = (x1 * p12 - x2 * p21).divide_exact(1, 2)
        rho = -(p12 * p21)
        rho_inv = rho.invert()
        E1 = x1 + x2
        E2 = x1 * x2
        out = TruncSeries.zero(n, D, rho0.valid)
        cache = {}

        def pw(base, k, tag):
            key = (tag, k)
            if key not in cache:
                cache[key] = base ** k
            return cache[key]

        for (n1, n2, n3, a, b), c in self.terms.items():
            t = TruncSeries.const(n, D, c, valid=rho0.valid)
            if n1:
                t = t * rho1
            if n2:
                t = t * pw(rho0, n2, "r0")
            if n3 > 0:
                t = t * pw(rho, n3, "r")
            elif n3 < 0:
                t = t * pw(rho_inv, -n3, "ri")
            if a:
                t = t * pw(E1, a, "e1")
            if b:
                t = t * pw(E2, b, "e2")
            out = out + t
        return out

    def specialize(self, spec):
        """Integer value under a Specialization with a ground target."""
        vals = spec.ground_values()
        rho = vals["rho"]
        total = 0
        for (n1, n2, n3, a, b), c in self.terms.items():
            if n3 < 0 and rho not in (1, -1):
                raise NonUnitRho(f"rho = {rho} is not invertible over Z")
            r = rho ** n3 if n3 >= 0 else rho ** (-n3)  # rho = +-1 if n3 < 0
            total += (c * vals["rho1"] ** n1 * vals["rho0"] ** n2 * r
                      * vals["E1"] ** a * vals["E2"] ** b)
        return total

    # -- presentation

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        names = []
        for (n1, n2, n3, a, b), c in self.sorted_terms():
            fs = []
            if n1:
                fs.append("rho1")
            if n2:
                fs.append("rho0" + (f"^{n2}" if n2 > 1 else ""))
            if n3:
                fs.append("rho" + (f"^{n3}" if n3 != 1 else ""))
            if a:
                fs.append("E1" + (f"^{a}" if a > 1 else ""))
            if b:
                fs.append("E2" + (f"^{b}" if b > 1 else ""))
            body = "*".join(fs)
            if not body:
                names.append(str(c))
            elif c == 1:
                names.append(body)
            elif c == -1:
                names.append("-" + body)
            else:
                names.append(f"{c}*{body}")
        return " + ".join(names).replace("+ -", "- ")

    __repr__ = __str__

    def to_json(self):
        return sorted([list(k), c] for k, c in self.terms.items())


GRE = GroundRingElem
R_ONE = GRE.const(1)
R_ZERO = GRE.zero()
RHO0 = GRE.gen("rho0")
RHO1 = GRE.gen("rho1")
RHO = GRE.gen("rho")
RHO_INV = GRE.gen("rho", -1)
E1 = GRE.gen("E1")
E2 = GRE.gen("E2")


def rho_n(n):
    """Dotted thin sphere values: rho_0, rho_1, then the two-term recurrence
    rho_{n+2} = E1 rho_{n+1} - E2 rho_n."""
    seq = [RHO0, RHO1]
    while len(seq) <= n:
        seq.append(E1 * seq[-1] - E2 * seq[-2])
    return seq[n]


def ground_normal_form(word):
    """Multiply out a formal word and return its normal form.

    word: iterable of (name, power) with names E1,E2,rho0,rho1,rho
    (rho may carry negative powers), or an existing GroundRingElem.
    """
    if isinstance(word, GroundRingElem):
        return GroundRingElem(dict(word.terms))._reduce()
    out = R_ONE
    for name, power in word:
        if name == "rho":
            out = out.rho_shift(power)
        elif name == "rho1":
            out = out * (GRE.gen("rho1") ** power)
        else:
            out = out * GRE.gen(name, power)
    return out


# ---------------------------------------------------------------------------
# polynomials in x1, x2 over R (exact foam-evaluation workspace)


class XPoly:
    """Polynomial in x1, x2 with GroundRingElem coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms or {}

    @staticmethod
    def const(g):
        if isinstance(g, int):
            g = GRE.const(g)
        return XPoly({(0, 0): g} if not g.is_zero() else {})

    @staticmethod
    def x(i, power=1):
        e = (power, 0) if i == 1 else (0, power)
        return XPoly({e: R_ONE})

    def __add__(self, other):
        out = dict(self.terms)
        for e, g in other.terms.items():
            v = out.get(e, R_ZERO) + g
            if v.is_zero():
                out.pop(e, None)
            else:
                out[e] = v
        return XPoly(out)

    def __neg__(self):
        return XPoly({e: -g for e, g in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, GroundRingElem)):
            g = GRE.const(other) if isinstance(other, int) else other
            if g.is_zero():
                return XPoly()
            out = {}
            for e, h in self.terms.items():
                v = h * g
                if not v.is_zero():
                    out[e] = v
            return XPoly(out)
        out = {}
        for e1, g1 in self.terms.items():
            for e2, g2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1])
                v = out.get(e, R_ZERO) + g1 * g2
                if v.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = v
        return XPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        r = XPoly.const(1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def is_zero(self):
        return not self.terms

    def divide_exact(self, k=1):
        """Exact division by (x1 - x2)^k; this is polynomial division with a
        zero-remainder requirement, no truncation involved."""
        cur = self
        for _ in range(k):
            by_m = {}
            top = 0
            for (d1, d2), g in cur.terms.items():
                by_m.setdefault(d1, {})[d2] = g
                top = max(top, d1)
            q = {}
            qm = {}
            for m in range(top, 0, -1):
                nxt = dict(by_m.get(m, {}))
                for d2, g in qm.items():
                    v = nxt.get(d2 + 1, R_ZERO) + g
                    if v.is_zero():
                        nxt.pop(d2 + 1, None)
                    else:
                        nxt[d2 + 1] = v
                qm = {d2: g for d2, g in nxt.items() if not g.is_zero()}
                for d2, g in qm.items():
                    q[(m - 1, d2)] = g
            rem = dict(by_m.get(0, {}))
            for d2, g in qm.items():
                v = rem.get(d2 + 1, R_ZERO) + g
                if v.is_zero():
                    rem.pop(d2 + 1, None)
                else:
                    rem[d2 + 1] = v
            if any(not g.is_zero() for g in rem.values()):
                raise NotDivisible("nonzero remainder dividing by (x1 - x2)")
            cur = XPoly(q)
        return cur

    def mul_x1_minus_x2(self, k=1):
        d = XPoly({(1, 0): R_ONE, (0, 1): -R_ONE})
        out = self
        for _ in range(k):
            out = out * d
        return out

    def to_ground(self):
        """Collapse a symmetric polynomial to a GroundRingElem via E1, E2."""
        work = dict(self.terms)
        out = R_ZERO
        while True:
            lead = None
            for (d1, d2), g in work.items():
                if d1 >= d2 and not g.is_zero():
                    if lead is None or (d1, d2) > lead:
                        lead = (d1, d2)
            if lead is None:
                break
            d1, d2 = lead
            g = work[lead]
            a, b = d1 - d2, d2
            out = out + g * (E1 ** a) * (E2 ** b)
            for t in range(a + 1):
                e = (t + b, a - t + b)
                v = work.get(e, R_ZERO) - g * comb(a, t)
                if v.is_zero():
                    work.pop(e, None)
                else:
                    work[e] = v
        if any(not g.is_zero() for g in work.values()):
            raise NotDivisible("polynomial is not symmetric in x1, x2")
        return out


# p12 = rho1 - rho0 x2 and p21 = rho1 - rho0 x1 as exact identities;
# negative powers use p12^{-1} = -p21 rho^{-1}, p21^{-1} = -p12 rho^{-1}.
P12_X = XPoly({(0, 0): RHO1, (0, 1): -RHO0})
P21_X = XPoly({(0, 0): RHO1, (1, 0): -RHO0})


def p_power_exact(which, k):
    """(p12 or p21)^k as an XPoly, any integer k.

    Negative powers use p12^{-1} = -p21 rho^{-1} (from p12 p21 = -rho)."""
    pos, neg = (P12_X, P21_X) if which == 12 else (P21_X, P12_X)
    if k >= 0:
        return pos ** k
    m = -k
    return (neg ** m) * GroundRingElem({(0, 0, -m, 0, 0): (-1) ** m})


# ---------------------------------------------------------------------------
# specializations


class Specialization:
    """Numeric target for both beta coefficients and the ground ring.

    beta_values: {(k,l): int} giving p(x,y) = 1 + sum beta x^k y^l
    ground: optional {E1,E2,rho0,rho1: int}; rho is derived as
            -(rho1^2 - E1 rho1 rho0 + E2 rho0^2).
    """

    def __init__(self, beta_values=None, ground=None, name=None):
        self.beta_values = dict(beta_values or {})
        self.ground = dict(ground) if ground else None
        self.name = name

    def ground_values(self):
        if self.ground is None:
            raise NonUnitRho("specialization has no ground target")
        g = dict(self.ground)
        g["rho"] = -(g["rho1"] ** 2 - g["E1"] * g["rho1"] * g["rho0"]
                     + g["E2"] * g["rho0"] ** 2)
        return g

    def symbol_values(self):
        return {("b", k, l): v for (k, l), v in self.beta_values.items()}

    def p_series(self, nvars, trunc, i, j):
        from .coeffring import p_from_betas
        return p_from_betas(nvars, trunc, i, j, self.beta_values)

    def is_consistent(self, trunc=8):
        """When both halves are given: the ground target must match the
        rho-values computed from the specialized p, and E1, E2 are only
        meaningful as 0 (they are variables, not parameters, otherwise)."""
        if self.ground is None or not self.beta_values:
            return True
        p12 = self.p_series(2, trunc, 1, 2)
        p21 = self.p_series(2, trunc, 2, 1)
        rho0 = (p12 - p21).divide_exact(1, 2)
        rho1 = ((TruncSeries.x(2, trunc, 1) * p12
                 - TruncSeries.x(2, trunc, 2) * p21).divide_exact(1, 2))
        g = self.ground_values()
        # compare constant terms after setting E1 = E2 = 0 (x -> 0)
        c0 = rho0.coeff((0, 0)).constant_value()
        c1 = rho1.coeff((0, 0)).constant_value()
        return c0 == g["rho0"] and c1 == g["rho1"]

    def to_json(self):
        return {"name": self.name,
                "beta": sorted([[k, l], v] for (k, l), v in self.beta_values.items()),
                "ground": self.ground}


PRESETS = {
    # p = 1: the undeformed Blanchet/BHPW theory (Khovanov homology).
    "khovanov": Specialization({}, {"E1": 0, "E2": 0, "rho0": 0, "rho1": 1},
                               name="khovanov"),
    # multiplicative deformation with beta_{1,0} = 1 at E1 = E2 = 0.
    "mult": Specialization({(1, 0): 1},
                           {"E1": 0, "E2": 0, "rho0": 1, "rho1": 1},
                           name="mult"),
}
