"""Exterior calculus on a chart: multivector fields, differential forms,
mixed bicomplex cells, wedge, contraction, Lie derivative, the
Schouten-Nijenhuis bracket, de Rham d with its (dpart, dbar) splitting and
the sharp map of a bivector.

Frame bookkeeping: on a chart of dimension n both the tangent and cotangent
frames carry 2n slots.  On complex charts slot k < n is the holomorphic
direction (d/dz_{k+1} resp. dz_{k+1}) and slot k >= n the antiholomorphic
one; on real charts the x-block comes before the y-block.  Components are
stored on strictly increasing index tuples, so every object is kept in its
canonical antisymmetric representation.

Schouten convention (fixed once, used everywhere): [X, f] = X(f),
[X, Y] = Lie bracket, and the graded Leibniz extension
[P, Q ^ R] = [P, Q] ^ R + (-1)^((p-1) q) Q ^ [P, R] together with graded
antisymmetry [P, Q] = -(-1)^((p-1)(q-1)) [Q, P].  These force
[X ^ Y, f] = Y(f) X - X(f) Y, i.e. [P, f] = -(-1)^p i_df P.
"""

from __future__ import annotations

from .errors import ChartError, DegreeError
from .exactalg import GQ, Chart, Poly, convert_chart


def merge_indices(left, right):
    """Concatenate two strictly increasing index tuples with the Koszul sign.

    Returns (tuple, sign) or None when an index repeats.
    """
    merged = list(left) + list(right)
    sign = 1
    # insertion sort, counting transpositions
    for a in range(1, len(merged)):
        b = a
        while b > 0 and merged[b - 1] > merged[b]:
            merged[b - 1], merged[b] = merged[b], merged[b - 1]
            sign = -sign
            b -= 1
        if b > 0 and merged[b - 1] == merged[b]:
            return None
    return tuple(merged), sign


def insert_index(index, indices):
    """Prepend one index into an increasing tuple; None if already present."""
    return merge_indices((index,), indices)


class _Alternating:
    """Shared storage for Multivector and Form."""

    __slots__ = ("chart", "degree", "comps")

    def __init__(self, chart: Chart, degree: int, comps=None):
        if degree < 0:
            raise DegreeError("degree must be >= 0")
        self.chart = chart
        self.degree = degree
        clean = {}
        if comps:
            for idx, poly in comps.items():
                idx = tuple(idx)
                if len(idx) != degree:
                    raise DegreeError(
                        f"index tuple {idx} has length != degree {degree}")
                if any(not 0 <= k < chart.nvars for k in idx):
                    raise ChartError(f"frame index out of range in {idx}")
                if list(idx) != sorted(set(idx)):
                    raise DegreeError(f"index tuple {idx} not increasing")
                if isinstance(poly, (int, GQ)):
                    poly = Poly.const(chart, poly)
                if poly.chart != chart:
                    raise ChartError("component on wrong chart")
                if not poly.is_zero():
                    clean[idx] = poly
        self.comps = clean

    # ------------------------------------------------------------------

    def _require_same(self, other):
        if self.chart != other.chart:
            raise ChartError(
                f"chart mismatch: {self.chart} vs {other.chart}")
        if type(self) is not type(other):
            raise DegreeError("cannot combine a form with a multivector")

    def _raw(self, comps):
        out = type(self).__new__(type(self))
        out.chart = self.chart
        out.degree = self.degree
        out.comps = comps
        return out

    def __add__(self, other):
        self._require_same(other)
        if self.degree != other.degree:
            # zero objects act as the zero of any degree
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise DegreeError("cannot add different degrees")
        comps = dict(self.comps)
        for idx, poly in other.comps.items():
            acc = comps.get(idx)
            poly = poly if acc is None else acc + poly
            if poly.is_zero():
                comps.pop(idx, None)
            else:
                comps[idx] = poly
        return self._raw(comps)

    def __neg__(self):
        return self._raw({i: -p for i, p in self.comps.items()})

    def __sub__(self, other):
        return self.__add__(other.__neg__())

    def scale(self, value):
        if isinstance(value, Poly):
            comps = {i: value * p for i, p in self.comps.items()}
            return type(self)(self.chart, self.degree, comps)
        value = GQ.of(value)
        comps = {i: p.scale(value) for i, p in self.comps.items()}
        return type(self)(self.chart, self.degree, comps)

    def __eq__(self, other):
        if not isinstance(other, _Alternating):
            return NotImplemented
        if type(self) is not type(other) or self.chart != other.chart:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.comps == other.comps

    def is_zero(self) -> bool:
        return not self.comps

    def component(self, idx) -> Poly:
        return self.comps.get(tuple(idx), Poly.zero(self.chart))

    def wedge(self, other):
        self._require_same(other)
        degree = self.degree + other.degree
        comps: dict = {}
        for i1, p1 in self.comps.items():
            for i2, p2 in other.comps.items():
                merged = merge_indices(i1, i2)
                if merged is None:
                    continue
                idx, sign = merged
                poly = p1 * p2
                if sign < 0:
                    poly = -poly
                acc = comps.get(idx)
                poly = poly if acc is None else acc + poly
                if poly.is_zero():
                    comps.pop(idx, None)
                else:
                    comps[idx] = poly
        out = type(self).__new__(type(self))
        out.chart = self.chart
        out.degree = degree
        out.comps = comps
        return out

    def map_coefficients(self, fn):
        comps = {}
        for idx, poly in self.comps.items():
            image = fn(poly)
            if not image.is_zero():
                comps[idx] = image
        return self._raw(comps)

    def bidegree(self):
        """(k, l) split across the holomorphic block, or None if mixed."""
        n = self.chart.n
        splits = {(sum(1 for k in idx if k < n),
                   sum(1 for k in idx if k >= n)) for idx in self.comps}
        if not splits:
            return (self.degree, 0) if self.degree == 0 else None
        if len(splits) == 1:
            return splits.pop()
        return None

    def sorted_comps(self):
        return sorted(self.comps.items())

    def _frame_prefix(self):
        raise NotImplementedError

    def __str__(self):
        if not self.comps:
            return "0"
        chunks = []
        for idx, poly in self.sorted_comps():
            frame = "^".join(self._frame_prefix() + self.chart.var_name(k)
                             for k in idx)
            if not frame:
                chunks.append(f"({poly})")
            else:
                chunks.append(f"({poly}) {frame}")
        return " + ".join(chunks)

    def __repr__(self):
        return f"{type(self).__name__}({self.chart}, {self})"


class Multivector(_Alternating):
    """Alternating contravariant tensor with Poly coefficients."""

    def _frame_prefix(self):
        return "d/d"

    @staticmethod
    def zero(chart: Chart, degree: int = 0) -> "Multivector":
        return Multivector(chart, degree, {})

    @staticmethod
    def function(f: Poly) -> "Multivector":
        return Multivector(f.chart, 0, {(): f})

    @staticmethod
    def frame(chart: Chart, index: int) -> "Multivector":
        return Multivector(chart, 1, {(index,): Poly.one(chart)})

    @staticmethod
    def from_components(chart: Chart, coeffs) -> "Multivector":
        """Degree-1 field from a length-2n coefficient list."""
        comps = {(k,): c for k, c in enumerate(coeffs)}
        return Multivector(chart, 1, comps)

    def coefficients(self):
        """Degree-1 field as a dense length-2n coefficient list."""
        if self.degree != 1:
            raise DegreeError("coefficients() needs a degree-1 field")
        return [self.component((k,)) for k in range(self.chart.nvars)]

    def apply_to(self, f: Poly) -> Poly:
        """Directional derivative X(f) of a degree-1 field."""
        if self.degree != 1:
            raise DegreeError("apply_to needs a degree-1 field")
        if f.chart != self.chart:
            raise ChartError("chart mismatch")
        out = Poly.zero(self.chart)
        for (k,), coeff in self.comps.items():
            out = out + coeff * f.diff(k)
        return out

    def evaluate(self, forms) -> Poly:
        """Full evaluation P(xi_1, ..., xi_p) as a determinant expansion."""
        forms = list(forms)
        if len(forms) != self.degree:
            raise DegreeError("wrong number of form arguments")
        out = Poly.zero(self.chart)
        for idx, coeff in self.comps.items():
            out = out + coeff * _det([[xi.component((k,)) for k in idx]
                                      for xi in forms])
        return out


class Form(_Alternating):
    """Alternating covariant tensor with Poly coefficients."""

    def _frame_prefix(self):
        return "d"

    @staticmethod
    def zero(chart: Chart, degree: int = 0) -> "Form":
        return Form(chart, degree, {})

    @staticmethod
    def frame(chart: Chart, index: int) -> "Form":
        return Form(chart, 1, {(index,): Poly.one(chart)})

    @staticmethod
    def from_components(chart: Chart, coeffs) -> "Form":
        comps = {(k,): c for k, c in enumerate(coeffs)}
        return Form(chart, 1, comps)

    def coefficients(self):
        if self.degree != 1:
            raise DegreeError("coefficients() needs a degree-1 form")
        return [self.component((k,)) for k in range(self.chart.nvars)]


def _det(rows) -> Poly:
    m = len(rows)
    if m == 0:
        raise DegreeError("empty determinant")
    chart = rows[0][0].chart
    if m == 1:
        return rows[0][0]
    out = Poly.zero(chart)
    for j in range(m):
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = rows[0][j] * _det(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


def pairing(xi: Form, x: Multivector) -> Poly:
    """Natural pairing <xi, X> of a 1-form with a vector field."""
    if xi.degree != 1 or x.degree != 1:
        raise DegreeError("pairing needs degree-1 arguments")
    if xi.chart != x.chart:
        raise ChartError("chart mismatch")
    out = Poly.zero(xi.chart)
    for (k,), coeff in xi.comps.items():
        other = x.comps.get((k,))
        if other is not None:
            out = out + coeff * other
    return out


def differential(f: Poly) -> Form:
    """Full de Rham differential df over all chart variables."""
    comps = {(k,): f.diff(k) for k in range(f.chart.nvars)}
    return Form(f.chart, 1, comps)


def contract(xi: Form, P: Multivector) -> Multivector:
    """Interior product i_xi P, contracting the first slot of P."""
    if xi.degree != 1:
        raise DegreeError("contract needs a 1-form")
    if P.degree == 0:
        raise DegreeError("cannot contract a degree-0 multivector")
    if xi.chart != P.chart:
        raise ChartError("chart mismatch")
    comps: dict = {}
    for idx, coeff in P.comps.items():
        for pos, k in enumerate(idx):
            xic = xi.comps.get((k,))
            if xic is None:
                continue
            rest = idx[:pos] + idx[pos + 1:]
            poly = coeff * xic
            if pos % 2 == 1:
                poly = -poly
            acc = comps.get(rest)
            poly = poly if acc is None else acc + poly
            if poly.is_zero():
                comps.pop(rest, None)
            else:
                comps[rest] = poly
    return Multivector(P.chart, P.degree - 1, comps)


def interior(x: Multivector, omega: Form) -> Form:
    """Interior product i_X omega of a vector field into a form."""
    if x.degree != 1:
        raise DegreeError("interior needs a vector field")
    if x.chart != omega.chart:
        raise ChartError("chart mismatch")
    if omega.degree == 0:
        return Form.zero(omega.chart, 0)
    comps: dict = {}
    for idx, coeff in omega.comps.items():
        for pos, k in enumerate(idx):
            xc = x.comps.get((k,))
            if xc is None:
                continue
            rest = idx[:pos] + idx[pos + 1:]
            poly = coeff * xc
            if pos % 2 == 1:
                poly = -poly
            acc = comps.get(rest)
            poly = poly if acc is None else acc + poly
            if poly.is_zero():
                comps.pop(rest, None)
            else:
                comps[rest] = poly
    return Form(omega.chart, omega.degree - 1, comps)


def exterior_d(omega: Form) -> Form:
    """De Rham differential on forms (all 2n chart variables)."""
    chart = omega.chart
    comps: dict = {}
    for idx, coeff in omega.comps.items():
        for k in range(chart.nvars):
            dcoeff = coeff.diff(k)
            if dcoeff.is_zero():
                continue
            merged = insert_index(k, idx)
            if merged is None:
                continue
            new_idx, sign = merged
            poly = dcoeff if sign > 0 else -dcoeff
            acc = comps.get(new_idx)
            poly = poly if acc is None else acc + poly
            if poly.is_zero():
                comps.pop(new_idx, None)
            else:
                comps[new_idx] = poly
    return Form(chart, omega.degree + 1, comps)


def derham_split(omega: Form):
    """Split d = dpart + dbar on a complex chart.

    dpart inserts holomorphic frame slots (dz), dbar antiholomorphic ones.
    """
    if not omega.chart.is_complex():
        raise ChartError("derham_split requires a complex chart")
    chart = omega.chart
    n = chart.n
    parts = ({}, {})
    for idx, coeff in omega.comps.items():
        for k in range(chart.nvars):
            dcoeff = coeff.diff(k)
            if dcoeff.is_zero():
                continue
            merged = insert_index(k, idx)
            if merged is None:
                continue
            new_idx, sign = merged
            target = parts[0] if k < n else parts[1]
            poly = dcoeff if sign > 0 else -dcoeff
            acc = target.get(new_idx)
            poly = poly if acc is None else acc + poly
            if poly.is_zero():
                target.pop(new_idx, None)
            else:
                target[new_idx] = poly
    return (Form(chart, omega.degree + 1, parts[0]),
            Form(chart, omega.degree + 1, parts[1]))


# ----------------------------------------------------------------------
# Schouten-Nijenhuis bracket

def schouten(P: Multivector, Q: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket with the module's fixed convention."""
    if P.chart != Q.chart:
        raise ChartError("chart mismatch")
    p, q = P.degree, Q.degree
    degree = max(p + q - 1, 0)
    comps: dict = {}

    def accumulate(src, dst, outer_sign):
        # sum_k (src right-derivative in slot k) wedge (d/dx_k dst)
        sp = src.degree
        for idx, f in src.comps.items():
            for pos, k in enumerate(idx, start=1):
                rest = idx[:pos - 1] + idx[pos:]
                sign = outer_sign * (-1 if (sp - pos) % 2 else 1)
                for jdx, g in dst.comps.items():
                    dg = g.diff(k)
                    if dg.is_zero():
                        continue
                    merged = merge_indices(rest, jdx)
                    if merged is None:
                        continue
                    new_idx, msign = merged
                    poly = f * dg
                    if sign * msign < 0:
                        poly = -poly
                    acc = comps.get(new_idx)
                    poly = poly if acc is None else acc + poly
                    if poly.is_zero():
                        comps.pop(new_idx, None)
                    else:
                        comps[new_idx] = poly

    accumulate(P, Q, 1)
    flip = -1 if ((p - 1) * (q - 1)) % 2 else 1
    accumulate(Q, P, -flip)
    return Multivector(P.chart, degree, comps)


def lie_derivative(x: Multivector, target):
    """Lie derivative along a degree-1 field; Cartan formula on forms,
    Schouten bracket on multivectors."""
    if x.degree != 1:
        raise DegreeError("lie_derivative needs a degree-1 field")
    if isinstance(target, Form):
        return interior(x, exterior_d(target)) + exterior_d(interior(x, target))
    if isinstance(target, Multivector):
        return schouten(x, target)
    raise DegreeError(f"cannot Lie-derive {type(target).__name__}")


def sharp(pi: Multivector, xi: Form) -> Multivector:
    """The anchor-like map of a bivector: pi_sharp(xi) = i_xi pi, so that
    pi(xi, eta) = <eta, pi_sharp(xi)>."""
    if pi.degree != 2:
        raise DegreeError("sharp needs a bivector")
    if xi.degree != 1:
        raise DegreeError("sharp needs a 1-form")
    return contract(xi, pi)


def sharp_matrix(pi: Multivector):
    """Matrix M with (pi_sharp xi)^a = sum_b M[a][b] xi_b over the frame."""
    if pi.degree != 2:
        raise DegreeError("sharp_matrix needs a bivector")
    chart = pi.chart
    m = chart.nvars
    rows = [[Poly.zero(chart) for _ in range(m)] for _ in range(m)]
    for (a, b), coeff in pi.comps.items():
        # pi_sharp(e^b) has +coeff in slot... i_{e^a} contributes along b
        rows[b][a] = rows[b][a] + coeff
        rows[a][b] = rows[a][b] - coeff
    return rows


# ----------------------------------------------------------------------
# chart conversion of frames

def _tangent_images(source: Chart, target: Chart):
    n = source.n
    half = GQ(1, 0) / GQ(2, 0)
    out = []
    if source.is_complex():
        # d/dz_k = (d/dx_k - i d/dy_k)/2 ; d/dzb_k = (d/dx_k + i d/dy_k)/2
        for k in range(n):
            out.append(Multivector(target, 1, {
                (k,): Poly.const(target, half),
                (n + k,): Poly.const(target, GQ(0, 1) * half * -1)}))
        for k in range(n):
            out.append(Multivector(target, 1, {
                (k,): Poly.const(target, half),
                (n + k,): Poly.const(target, GQ(0, 1) * half)}))
    else:
        # d/dx_k = d/dz_k + d/dzb_k ; d/dy_k = i (d/dz_k - d/dzb_k)
        for k in range(n):
            out.append(Multivector(target, 1, {
                (k,): Poly.one(target), (n + k,): Poly.one(target)}))
        for k in range(n):
            out.append(Multivector(target, 1, {
                (k,): Poly.const(target, GQ(0, 1)),
                (n + k,): Poly.const(target, GQ(0, -1))}))
    return out


def _cotangent_images(source: Chart, target: Chart):
    n = source.n
    half = GQ(1, 0) / GQ(2, 0)
    out = []
    if source.is_complex():
        # dz_k = dx_k + i dy_k ; dzb_k = dx_k - i dy_k
        for k in range(n):
            out.append(Form(target, 1, {
                (k,): Poly.one(target),
                (n + k,): Poly.const(target, GQ(0, 1))}))
        for k in range(n):
            out.append(Form(target, 1, {
                (k,): Poly.one(target),
                (n + k,): Poly.const(target, GQ(0, -1))}))
    else:
        # dx_k = (dz_k + dzb_k)/2 ; dy_k = (dz_k - dzb_k)/2i
        minus_half_i = GQ(0, 1) * half * -1
        for k in range(n):
            out.append(Form(target, 1, {
                (k,): Poly.const(target, half),
                (n + k,): Poly.const(target, half)}))
        for k in range(n):
            out.append(Form(target, 1, {
                (k,): Poly.const(target, minus_half_i),
                (n + k,): Poly.const(target, minus_half_i * -1)}))
    return out


def convert_alternating(obj, target: Chart):
    """Transport a Multivector or Form across the real/complex chart pair."""
    if obj.chart == target:
        return obj
    if obj.chart.n != target.n:
        raise ChartError("dimension mismatch in chart conversion")
    if isinstance(obj, Multivector):
        images = _tangent_images(obj.chart, target)
        unit: _Alternating = Multivector(target, 0, {(): Poly.one(target)})
    else:
        images = _cotangent_images(obj.chart, target)
        unit = Form(target, 0, {(): Poly.one(target)})
    total = type(unit)(target, obj.degree, {})
    for idx, coeff in obj.comps.items():
        term = unit.map_coefficients(
            lambda p, c=coeff: p * convert_chart(c, target))
        for k in idx:
            term = term.wedge(images[k])
        total = total + term
    return total


# ----------------------------------------------------------------------
# mixed bicomplex cells

class MixedForm:
    """Element of Omega^(0,q)(X, T^(p,0)X): components on pairs (J, I) of
    increasing index tuples, J the dzb slots and I the d/dz slots."""

    __slots__ = ("chart", "q", "p", "comps")

    def __init__(self, chart: Chart, q: int, p: int, comps=None):
        if not chart.is_complex():
            raise ChartError("MixedForm requires a complex chart")
        if q < 0 or p < 0:
            raise DegreeError("negative bidegree")
        self.chart = chart
        self.q = q
        self.p = p
        clean = {}
        if comps:
            for key, poly in comps.items():
                J, I = tuple(key[0]), tuple(key[1])
                if len(J) != q or len(I) != p:
                    raise DegreeError("component does not match bidegree")
                for t in (J, I):
                    if list(t) != sorted(set(t)):
                        raise DegreeError(f"index tuple {t} not increasing")
                    if any(not 0 <= k < chart.n for k in t):
                        raise ChartError("mixed-form index out of range")
                if isinstance(poly, (int, GQ)):
                    poly = Poly.const(chart, poly)
                if poly.chart != chart:
                    raise ChartError("component on wrong chart")
                if not poly.is_zero():
                    clean[(J, I)] = poly
        self.comps = clean

    @staticmethod
    def zero(chart: Chart, q: int = 0, p: int = 0) -> "MixedForm":
        return MixedForm(chart, q, p, {})

    @staticmethod
    def function(f: Poly) -> "MixedForm":
        return MixedForm(f.chart, 0, 0, {((), ()): f})

    @staticmethod
    def from_multivector(P: Multivector) -> "MixedForm":
        """Embed a (p,0) multivector as a q = 0 cell."""
        bid = P.bidegree()
        if bid is None or bid[1] != 0:
            raise DegreeError("need a (p,0) multivector")
        comps = {((), idx): poly for idx, poly in P.comps.items()}
        return MixedForm(P.chart, 0, P.degree, comps)

    def _raw(self, comps):
        out = MixedForm.__new__(MixedForm)
        out.chart = self.chart
        out.q = self.q
        out.p = self.p
        out.comps = comps
        return out

    def __add__(self, other):
        if not isinstance(other, MixedForm) or other.chart != self.chart:
            raise ChartError("chart mismatch")
        if (self.q, self.p) != (other.q, other.p):
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise DegreeError("cannot add different bidegrees")
        comps = dict(self.comps)
        for key, poly in other.comps.items():
            acc = comps.get(key)
            poly = poly if acc is None else acc + poly
            if poly.is_zero():
                comps.pop(key, None)
            else:
                comps[key] = poly
        return self._raw(comps)

    def __neg__(self):
        return self._raw({k: -p for k, p in self.comps.items()})

    def __sub__(self, other):
        return self.__add__(other.__neg__())

    def scale(self, value):
        if isinstance(value, Poly):
            comps = {k: value * p for k, p in self.comps.items()}
        else:
            value = GQ.of(value)
            comps = {k: p.scale(value) for k, p in self.comps.items()}
        return MixedForm(self.chart, self.q, self.p, comps)

    def __eq__(self, other):
        if not isinstance(other, MixedForm):
            return NotImplemented
        if self.chart != other.chart:
            return False
        if not self.comps and not other.comps:
            return True
        return ((self.q, self.p) == (other.q, other.p)
                and self.comps == other.comps)

    def is_zero(self) -> bool:
        return not self.comps

    def component(self, J, I) -> Poly:
        return self.comps.get((tuple(J), tuple(I)), Poly.zero(self.chart))

    def sorted_comps(self):
        return sorted(self.comps.items())

    def __str__(self):
        if not self.comps:
            return "0"
        chunks = []
        n = self.chart.n
        for (J, I), poly in self.sorted_comps():
            fpart = "^".join("d" + self.chart.var_name(n + j) for j in J)
            vpart = "^".join("d/d" + self.chart.var_name(i) for i in I)
            label = " (x) ".join(x for x in (fpart, vpart) if x)
            chunks.append(f"({poly}) {label}" if label else f"({poly})")
        return " + ".join(chunks)

    def __repr__(self):
        return f"MixedForm({self.chart}, {self})"


def dbar_mixed(m: MixedForm) -> MixedForm:
    """The Dolbeault column operator: dbar acts on coefficients, in the
    holomorphic coordinate frame of the polyvector slots."""
    chart = m.chart
    n = chart.n
    comps: dict = {}
    for (J, I), coeff in m.comps.items():
        for b in range(n):
            dcoeff = coeff.diff(n + b)
            if dcoeff.is_zero():
                continue
            merged = insert_index(b, J)
            if merged is None:
                continue
            newJ, sign = merged
            poly = dcoeff if sign > 0 else -dcoeff
            key = (newJ, I)
            acc = comps.get(key)
            poly = poly if acc is None else acc + poly
            if poly.is_zero():
                comps.pop(key, None)
            else:
                comps[key] = poly
    return MixedForm(chart, m.q + 1, m.p, comps)


def dbar(obj):
    """Polymorphic dbar: Form -> Form, MixedForm -> MixedForm,
    (p,0) Multivector -> MixedForm cell."""
    if isinstance(obj, Form):
        return derham_split(obj)[1]
    if isinstance(obj, MixedForm):
        return dbar_mixed(obj)
    if isinstance(obj, Multivector):
        return dbar_mixed(MixedForm.from_multivector(obj))
    raise DegreeError(f"cannot apply dbar to {type(obj).__name__}")
