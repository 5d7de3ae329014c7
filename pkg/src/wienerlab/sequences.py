"""Integer and real subsequence generators with exact modular evaluation.

Supported kinds: polynomial images, primes, polynomials of primes, rotation
and polynomial return times, the perturbed even sequence (odd terms inserted
along a sparse index set), and lacunary powers.  Term values honor a 64-bit
native-width contract: ``term`` raises instead of producing a value that a
64-bit consumer would wrap, while ``term_mod`` stays exact for every index.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

NATIVE_MAX = 2**63 - 1

SCAN_CAP_DEFAULT = 10**8


class SequenceRangeError(Exception):
    """An index is beyond the representable or generated range."""


class PrimeSieve:
    """Eratosthenes sieve caching all primes up to ``limit``, ascending."""

    def __init__(self, limit: int):
        if limit < 2:
            raise ValueError("sieve limit must be >= 2")
        self.limit = limit
        flags = bytearray([1]) * (limit + 1)
        flags[0:2] = b"\x00\x00"
        for p in range(2, math.isqrt(limit) + 1):
            if flags[p]:
                start = p * p
                flags[start : limit + 1 : p] = b"\x00" * ((limit - start) // p + 1)
        self.primes: list[int] = [i for i, f in enumerate(flags) if f]

    def nth(self, n: int) -> int:
        """The n-th prime, 1-based."""
        if n < 1 or n > len(self.primes):
            raise SequenceRangeError(
                f"prime index {n} beyond sieve capacity ({len(self.primes)} primes <= {self.limit})"
            )
        return self.primes[n - 1]

    def count_upto(self, x: int) -> int:
        if x > self.limit:
            raise SequenceRangeError(f"{x} beyond sieve limit {self.limit}")
        return bisect.bisect_right(self.primes, x)

    def __contains__(self, x: int) -> bool:
        if x > self.limit:
            raise SequenceRangeError(f"{x} beyond sieve limit {self.limit}")
        i = bisect.bisect_left(self.primes, x)
        return i < len(self.primes) and self.primes[i] == x


def sieve_limit_for_count(count: int) -> int:
    """A sieve limit guaranteed to hold at least ``count`` primes."""
    if count < 6:
        return 100
    x = float(count)
    return int(1.3 * x * (math.log(x) + math.log(math.log(x)))) + 100


_sieve_cache: dict[int, PrimeSieve] = {}


def get_sieve(limit: int) -> PrimeSieve:
    """Shared read-only sieve instances, built once per limit."""
    sieve = _sieve_cache.get(limit)
    if sieve is None:
        sieve = PrimeSieve(limit)
        _sieve_cache[limit] = sieve
    return sieve


def _poly_eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_eval_mod(coeffs: Sequence[int], x: int, q: int) -> int:
    x %= q
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


def _check_poly(coeffs: Sequence[int]) -> list[int]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        raise ValueError("polynomial degree must be >= 1")
    if coeffs[-1] <= 0:
        raise ValueError("leading coefficient must be positive")
    return coeffs


def _is_prime_small(k: int) -> bool:
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    f = 3
    while f * f <= k:
        if k % f == 0:
            return False
        f += 2
    return True


def _fraction_of(x: Union[float, Fraction, tuple[int, int]]) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, tuple):
        return Fraction(*x)
    return Fraction(x)  # exact binary expansion of the float


class IntSequence:
    """A subsequence (k_n) of the integers, 1-indexed, eventually increasing.

    Instances are immutable after construction apart from lazily built
    caches (sieve, materialized return-time terms), so concurrent reads are
    safe.  ``term_mod(n, q) == term(n) % q`` whenever ``term(n)`` is
    representable.
    """

    def __init__(self, kind: str, params: dict):
        self.kind = kind
        self.params = dict(params)
        self._sieve: Optional[PrimeSieve] = None
        self._terms: Optional[list[int]] = None
        if kind in ("poly", "poly-of-primes", "poly-return"):
            self.params["coeffs"] = _check_poly(self.params["coeffs"])
        if kind == "lacunary" and self.params["base"] < 2:
            raise ValueError("lacunary base must be >= 2")

    # -- construction helpers -------------------------------------------------

    def _sieve_obj(self) -> PrimeSieve:
        if self._sieve is None:
            self._sieve = get_sieve(self.params["sieve_limit"])
        return self._sieve

    def _materialized(self) -> list[int]:
        if self._terms is None:
            if self.kind in ("rotation-return", "poly-return"):
                self._terms = _return_times(self.kind, self.params)
            elif self.kind == "insertion-perturbed":
                self._terms = _insertion_terms(self.params)
            else:
                raise AssertionError(self.kind)
        return self._terms

    # -- core evaluation -------------------------------------------------------

    @property
    def max_safe_index(self) -> int:
        """Largest n for which term(n) fits the 64-bit native width."""
        kind = self.kind
        if kind == "poly":
            return _largest_n(lambda n: _poly_eval(self.params["coeffs"], n))
        if kind == "primes":
            return len(self._sieve_obj().primes)
        if kind == "poly-of-primes":
            sieve = self._sieve_obj()
            coeffs = self.params["coeffs"]
            lo, hi = 0, len(sieve.primes)
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if _poly_eval(coeffs, sieve.primes[mid - 1]) <= NATIVE_MAX:
                    lo = mid
                else:
                    hi = mid - 1
            return lo
        if kind == "lacunary":
            base = self.params["base"]
            n = 0
            v = 1
            while v * base <= NATIVE_MAX:
                v *= base
                n += 1
            return n
        return len(self._materialized())

    def term(self, n: int) -> int:
        """k_n; raises SequenceRangeError past the native width or generated range."""
        if n < 1:
            raise SequenceRangeError("indices are 1-based")
        kind = self.kind
        if kind == "poly":
            v = _poly_eval(self.params["coeffs"], n)
            if v > NATIVE_MAX:
                raise SequenceRangeError(f"term({n}) exceeds the 64-bit native width")
            return v
        if kind == "primes":
            return self._sieve_obj().nth(n)
        if kind == "poly-of-primes":
            v = _poly_eval(self.params["coeffs"], self._sieve_obj().nth(n))
            if v > NATIVE_MAX:
                raise SequenceRangeError(f"term({n}) exceeds the 64-bit native width")
            return v
        if kind == "lacunary":
            if n > self.max_safe_index:
                raise SequenceRangeError(
                    f"term({n}) exceeds the 64-bit native width (term_mod is still exact)"
                )
            return self.params["base"] ** n
        terms = self._materialized()
        if n > len(terms):
            raise SequenceRangeError(f"only {len(terms)} terms generated")
        return terms[n - 1]

    def term_mod(self, n: int, q: int) -> int:
        """k_n mod q, exact for every index the kind can address."""
        if q < 1:
            raise ValueError("modulus must be >= 1")
        if n < 1:
            raise SequenceRangeError("indices are 1-based")
        kind = self.kind
        if kind == "poly":
            return _poly_eval_mod(self.params["coeffs"], n, q)
        if kind == "primes":
            return self._sieve_obj().nth(n) % q
        if kind == "poly-of-primes":
            return _poly_eval_mod(self.params["coeffs"], self._sieve_obj().nth(n), q)
        if kind == "lacunary":
            return pow(self.params["base"], n, q)
        return self.term(n) % q

    def terms(self, count: int) -> list[int]:
        return [self.term(n) for n in range(1, count + 1)]

    def residues(self, count: int, q: int) -> list[int]:
        return [self.term_mod(n, q) for n in range(1, count + 1)]

    def count_upto(self, bound: int) -> int:
        """|{n : k_n <= bound}|."""
        kind = self.kind
        if kind == "primes":
            return self._sieve_obj().count_upto(bound)
        if kind == "poly":
            # linear scan until past the turning region and above the bound;
            # a Cauchy bound on P' roots marks where P is strictly increasing
            coeffs = self.params["coeffs"]
            lead = coeffs[-1]
            turn = 2 + 2 * max(abs(c) for c in coeffs) // lead
            count = 0
            n = 1
            while True:
                v = _poly_eval(coeffs, n)
                if v <= bound:
                    count += 1
                elif n > turn:
                    return count
                n += 1
        if kind == "lacunary":
            base, n, v = self.params["base"], 0, 1
            while v * base <= bound:
                v *= base
                n += 1
            return n
        if kind == "poly-of-primes":
            sieve = self._sieve_obj()
            coeffs = self.params["coeffs"]
            count = 0
            for p in sieve.primes:
                if _poly_eval(coeffs, p) <= bound:
                    count += 1
                else:
                    break
            return count
        terms = self._materialized()
        return bisect.bisect_right(terms, bound)

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        params = {k: v for k, v in self.params.items() if not k.startswith("_")}
        for key in ("alpha", "x0"):
            if key in params and isinstance(params[key], Fraction):
                params[key] = [params[key].numerator, params[key].denominator]
        return {"kind": self.kind, "params": params}

    @classmethod
    def from_json(cls, obj: dict) -> "IntSequence":
        kind = obj["kind"]
        params = dict(obj.get("params", {}))
        builders = {
            "poly": lambda: poly_seq(params["coeffs"]),
            "primes": lambda: primes_seq(params["sieve_limit"]),
            "poly-of-primes": lambda: poly_of_primes_seq(
                params["coeffs"], params["sieve_limit"]
            ),
            "lacunary": lambda: lacunary_seq(params["base"]),
            "rotation-return": lambda: rotation_return_times(
                _angle_param(params["alpha"]),
                tuple(params["arc"]),
                _angle_param(params.get("x0", 0.0)),
                params["count"],
                diagnostic=params.get("diagnostic", False),
                scan_cap=params.get("scan_cap", SCAN_CAP_DEFAULT),
            ),
            "poly-return": lambda: polynomial_return_times(
                _angle_param(params["alpha"]),
                params["coeffs"],
                tuple(params["arc"]),
                _angle_param(params.get("x0", 0.0)),
                params["count"],
                diagnostic=params.get("diagnostic", False),
                scan_cap=params.get("scan_cap", SCAN_CAP_DEFAULT),
            ),
            "insertion-perturbed": lambda: insertion_perturbed_even_seq(
                params.get("insert", "none"), params["count"]
            ),
        }
        if kind not in builders:
            raise ValueError(f"unknown sequence kind: {kind}")
        return builders[kind]()

    def __repr__(self) -> str:
        return f"IntSequence({self.kind}, {self.params})"


def _angle_param(x) -> Union[float, Fraction]:
    if isinstance(x, (list, tuple)):
        return Fraction(int(x[0]), int(x[1]))
    return float(x)


def _largest_n(value_at, bound: int = NATIVE_MAX) -> int:
    """Largest n >= 0 with value_at(n) <= bound for eventually increasing values."""
    if value_at(1) > bound:
        return 0
    hi = 1
    while value_at(hi) <= bound:
        hi *= 2
        if hi > 2**70:
            return hi  # effectively unbounded
    lo = hi // 2
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if value_at(mid) <= bound:
            lo = mid
        else:
            hi = mid
    return lo


# -- constructors ----------------------------------------------------------------


def poly_seq(coeffs: Sequence[int]) -> IntSequence:
    """k_n = P(n) for an integer polynomial, coefficients in ascending powers."""
    return IntSequence("poly", {"coeffs": list(coeffs)})


def primes_seq(sieve_limit: int) -> IntSequence:
    """k_n = p_n, the n-th prime, up to the sieve capacity."""
    if sieve_limit < 2:
        raise ValueError("sieve limit must be >= 2")
    return IntSequence("primes", {"sieve_limit": sieve_limit})


def poly_of_primes_seq(coeffs: Sequence[int], sieve_limit: int) -> IntSequence:
    """k_n = P(p_n)."""
    if sieve_limit < 2:
        raise ValueError("sieve limit must be >= 2")
    return IntSequence("poly-of-primes", {"coeffs": list(coeffs), "sieve_limit": sieve_limit})


def lacunary_seq(base: int) -> IntSequence:
    """k_n = base**n; term_mod stays exact past the native width."""
    return IntSequence("lacunary", {"base": base})


def rotation_return_times(
    alpha: Union[float, Fraction, tuple[int, int]],
    arc: tuple[float, float],
    x0: Union[float, Fraction] = 0.0,
    count: int = 1000,
    diagnostic: bool = False,
    scan_cap: int = SCAN_CAP_DEFAULT,
) -> IntSequence:
    """Ascending enumeration of {n >= 1 : frac(x0 + n*alpha) in [u, v)}.

    alpha is taken as irrational on the caller's word when given as a float;
    an explicitly rational alpha (Fraction or (p, q) pair) requires
    diagnostic=True since the orbit is then periodic.
    """
    if isinstance(alpha, (Fraction, tuple)) and not diagnostic:
        raise ValueError("explicitly rational alpha requires diagnostic=True")
    u, v = arc
    if not (0.0 <= u < v <= 1.0):
        raise ValueError("need an arc [u,v) with 0 <= u < v <= 1")
    return IntSequence(
        "rotation-return",
        {
            "alpha": _fraction_of(alpha) if diagnostic else float(alpha),
            "arc": (float(u), float(v)),
            "x0": _fraction_of(x0),
            "count": count,
            "diagnostic": diagnostic,
            "scan_cap": scan_cap,
        },
    )


def polynomial_return_times(
    alpha: Union[float, Fraction, tuple[int, int]],
    coeffs: Sequence[int],
    arc: tuple[float, float],
    x0: Union[float, Fraction] = 0.0,
    count: int = 1000,
    diagnostic: bool = False,
    scan_cap: int = SCAN_CAP_DEFAULT,
) -> IntSequence:
    """Ascending enumeration of {n >= 1 : frac(x0 + P(n)*alpha) in [u, v)}.

    Degree >= 2 is the theoretically clean regime; degree 1 is allowed and
    flagged via params["degree_warning"].
    """
    if isinstance(alpha, (Fraction, tuple)) and not diagnostic:
        raise ValueError("explicitly rational alpha requires diagnostic=True")
    u, v = arc
    if not (0.0 <= u < v <= 1.0):
        raise ValueError("need an arc [u,v) with 0 <= u < v <= 1")
    coeffs = _check_poly(coeffs)
    return IntSequence(
        "poly-return",
        {
            "alpha": _fraction_of(alpha) if diagnostic else float(alpha),
            "coeffs": coeffs,
            "arc": (float(u), float(v)),
            "x0": _fraction_of(x0),
            "count": count,
            "diagnostic": diagnostic,
            "degree_warning": len(coeffs) - 1 < 2,
            "scan_cap": scan_cap,
        },
    )


def insertion_perturbed_even_seq(
    insert: Union[str, Sequence[int]], count: int
) -> IntSequence:
    """The even numbers 2,4,... with 2k+1 inserted after 2k for k in a sparse set.

    ``insert`` is "none", "primes", "squares", or an explicit index list; the
    caller is responsible for the set having density zero.
    """
    if isinstance(insert, str):
        if insert not in ("none", "primes", "squares"):
            raise ValueError(f"unknown insert set: {insert}")
        spec: Union[str, list[int]] = insert
    else:
        spec = sorted(set(int(k) for k in insert))
    return IntSequence("insertion-perturbed", {"insert": spec, "count": count})


# -- generation internals ----------------------------------------------------------


def _return_times(kind: str, params: dict) -> list[int]:
    """Exact orbit scan: positions are rationals over one common denominator,
    so arc membership tests are integer comparisons."""
    alpha = _fraction_of(params["alpha"])
    x0 = _fraction_of(params["x0"])
    u, v = params["arc"]
    count = params["count"]
    cap = params["scan_cap"]
    fu, fv = Fraction(u), Fraction(v)
    den = math.lcm(alpha.denominator, x0.denominator, fu.denominator, fv.denominator)
    a_num = alpha.numerator * (den // alpha.denominator)
    x_num = (x0.numerator * (den // x0.denominator)) % den
    u_num = fu.numerator * (den // fu.denominator)
    v_num = fv.numerator * (den // fv.denominator)
    out: list[int] = []
    if kind == "rotation-return":
        pos = x_num
        for n in range(1, cap + 1):
            pos = (pos + a_num) % den
            if u_num <= pos < v_num:
                out.append(n)
                if len(out) == count:
                    return out
    else:
        coeffs = params["coeffs"]
        for n in range(1, cap + 1):
            pos = (x_num + _poly_eval(coeffs, n) * a_num) % den
            if u_num <= pos < v_num:
                out.append(n)
                if len(out) == count:
                    return out
    if not out:
        raise SequenceRangeError(f"no return times within the scan cap {cap}")
    return out


def _insertion_terms(params: dict) -> list[int]:
    insert = params["insert"]
    count = params["count"]
    if insert == "none":
        member = lambda k: False
    elif insert == "primes":
        member = _is_prime_small
    elif insert == "squares":
        member = lambda k: math.isqrt(k) ** 2 == k
    else:
        s = set(insert)
        member = lambda k: k in s
    out: list[int] = []
    k = 1
    while len(out) < count:
        out.append(2 * k)
        if len(out) < count and member(k):
            out.append(2 * k + 1)
        k += 1
    return out[:count]


# -- probes ----------------------------------------------------------------


def gap_liminf_probe(seq: IntSequence, horizon: int) -> tuple[int, int]:
    """Smallest gap k_{n+1}-k_n among the first ``horizon`` terms and its multiplicity."""
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    terms = seq.terms(horizon)
    min_gap = None
    repeats = 0
    for a, b in zip(terms, terms[1:]):
        g = b - a
        if min_gap is None or g < min_gap:
            min_gap, repeats = g, 1
        elif g == min_gap:
            repeats += 1
    assert min_gap is not None
    return min_gap, repeats


def upper_density_estimate(seq: IntSequence, bound: int) -> float:
    """|{n : k_n <= bound}| / bound."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    return seq.count_upto(bound) / bound


# -- real-valued subsequences ----------------------------------------------------


class RealSequence:
    """A real subsequence k_n = C(n) or C(p_n) with exact-form coefficients.

    Coefficients are ExactReal values (rational + rational*xi); the constant
    term may carry the irrational offset that makes the sequence leave every
    scaled copy of the integers.  ``xi_value`` is the numeric stand-in for xi.
    """

    def __init__(self, kind: str, coeffs, xi_value: float | None = None,
                 sieve_limit: int = 2):
        from .exact import XI_DEFAULT, ExactReal

        if kind not in ("real-poly", "real-poly-of-primes"):
            raise ValueError(f"unknown real sequence kind: {kind}")
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1].is_zero:
            coeffs.pop()
        if len(coeffs) < 2:
            raise ValueError("polynomial degree must be >= 1")
        self.kind = kind
        self.coeffs: list[ExactReal] = coeffs
        self.xi_value = XI_DEFAULT if xi_value is None else xi_value
        self.sieve_limit = sieve_limit
        self._sieve: Optional[PrimeSieve] = None
        if self.leading_value() <= 0:
            raise ValueError("leading coefficient must be positive")

    def leading_value(self) -> float:
        return self.coeffs[-1].value(self.xi_value)

    def _argument(self, n: int) -> int:
        if self.kind == "real-poly":
            return n
        if self._sieve is None:
            self._sieve = get_sieve(self.sieve_limit)
        return self._sieve.nth(n)

    def term_exact(self, n: int):
        x = self._argument(n)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc.scaled(x) + c
        return acc

    def term_value(self, n: int) -> float:
        return self.term_exact(n).value(self.xi_value)

    def affine_form(self):
        """Decompose as k_n = a*Q(n) + b with Q an integer polynomial, Q(0)=0.

        Returns (a: ExactReal, b: ExactReal, q_coeffs: list[int]) or None when
        the non-constant coefficients are not commensurable in the exact form.
        """
        from .exact import ExactReal

        body = self.coeffs[1:]
        nonzero = [c for c in body if not c.is_zero]
        if all(c.is_rational for c in nonzero):
            g = Fraction(0)
            for c in nonzero:
                g = _fraction_gcd(g, c.rat)
            a = ExactReal(rat=g)
        elif all(c.rat == 0 for c in nonzero):
            g = Fraction(0)
            for c in nonzero:
                g = _fraction_gcd(g, c.xi)
            a = ExactReal(xi=g)
        else:
            return None
        q_coeffs = [0]
        for c in body:
            r = c.rational_quotient(a) if not c.is_zero else Fraction(0)
            if r is None or r.denominator != 1:
                return None
            q_coeffs.append(int(r))
        return a, self.coeffs[0], q_coeffs

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": {
                "coeffs": [{"rat": str(c.rat), "xi": str(c.xi)} for c in self.coeffs],
                "xi_value": self.xi_value,
                "sieve_limit": self.sieve_limit,
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RealSequence":
        from .exact import ExactReal

        params = obj.get("params", {})
        coeffs = [
            ExactReal.of(c.get("rat", 0), c.get("xi", 0)) for c in params["coeffs"]
        ]
        return cls(
            obj["kind"],
            coeffs,
            xi_value=params.get("xi_value"),
            sieve_limit=params.get("sieve_limit", 2),
        )


def _fraction_gcd(a: Fraction, b: Fraction) -> Fraction:
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    return Fraction(
        math.gcd(a.numerator * b.denominator, b.numerator * a.denominator),
        a.denominator * b.denominator,
    )


def real_poly_seq(coeffs, xi_value: float | None = None) -> RealSequence:
    """k_n = C(n) with ExactReal coefficients in ascending powers."""
    return RealSequence("real-poly", coeffs, xi_value=xi_value)


def real_poly_of_primes_seq(coeffs, sieve_limit: int, xi_value: float | None = None) -> RealSequence:
    """k_n = C(p_n)."""
    return RealSequence(
        "real-poly-of-primes", coeffs, xi_value=xi_value, sieve_limit=sieve_limit
    )
