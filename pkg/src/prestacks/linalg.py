"""Exact scalars and sparse matrices.

Everything downstream (differentials, comparison maps, cohomology) reduces to
rank and kernel computations over an exact field: the rationals, a prime
field, or (for deformation checks) dual numbers over either.  No floating
point appears anywhere; equality checks are exact and tolerance is zero.
"""

from __future__ import annotations

from fractions import Fraction


class RationalField:
    """The field Q, scalars stored as fractions.Fraction in lowest terms."""

    name = "Q"

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def from_int(self, n):
        return Fraction(n)

    def parse(self, s):
        if isinstance(s, (int, Fraction)):
            return Fraction(s)
        return Fraction(str(s))

    def show(self, a):
        return str(a)

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p for a prime p < 2**31, scalars stored in [0, p)."""

    def __init__(self, p):
        if p < 2 or p >= 2 ** 31:
            raise ValueError("prime must satisfy 2 <= p < 2**31")
        self.p = p
        self.name = "F%d" % p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def from_int(self, n):
        return n % self.p

    def parse(self, s):
        if isinstance(s, int):
            return s % self.p
        s = str(s)
        if "/" in s:
            num, den = s.split("/")
            return self.mul(int(num) % self.p, self.inv(int(den)))
        return int(s) % self.p

    def show(self, a):
        return str(a % self.p)

    def __repr__(self):
        return "GF(%d)" % self.p


class DualNumbers:
    """The ring k[e]/(e^2) over a base field; scalars are pairs (a, b) = a + b e.

    Not a field: (a, b) is invertible iff a is.  Enough structure for
    validating first-order deformations; never used for elimination.
    """

    def __init__(self, base):
        self.base = base
        self.name = base.name + "[e]"
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)
        self.eps = (base.zero, base.one)

    def add(self, x, y):
        return (self.base.add(x[0], y[0]), self.base.add(x[1], y[1]))

    def sub(self, x, y):
        return (self.base.sub(x[0], y[0]), self.base.sub(x[1], y[1]))

    def mul(self, x, y):
        b = self.base
        return (b.mul(x[0], y[0]), b.add(b.mul(x[0], y[1]), b.mul(x[1], y[0])))

    def neg(self, x):
        return (self.base.neg(x[0]), self.base.neg(x[1]))

    def inv(self, x):
        a0 = self.base.inv(x[0])
        # (a + be)^-1 = a^-1 - a^-2 b e
        return (a0, self.base.neg(self.base.mul(self.base.mul(a0, a0), x[1])))

    def is_zero(self, x):
        return self.base.is_zero(x[0]) and self.base.is_zero(x[1])

    def eq(self, x, y):
        return self.base.eq(x[0], y[0]) and self.base.eq(x[1], y[1])

    def from_int(self, n):
        return (self.base.from_int(n), self.base.zero)

    def parse(self, s):
        if isinstance(s, (list, tuple)):
            return (self.base.parse(s[0]), self.base.parse(s[1]))
        return (self.base.parse(s), self.base.zero)

    def show(self, x):
        return [self.base.show(x[0]), self.base.show(x[1])]

    def __repr__(self):
        return "Dual(%r)" % self.base


QQ = RationalField()


def make_field(ring):
    """Build a scalar ring from its file-format tag.

    Accepts "Q", {"Fp": p}, "Q[e]" and {"Fp[e]": p}.
    """
    if ring == "Q":
        return QQ
    if ring == "Q[e]":
        return DualNumbers(QQ)
    if isinstance(ring, dict):
        if "Fp" in ring:
            return PrimeField(int(ring["Fp"]))
        if "Fp[e]" in ring:
            return DualNumbers(PrimeField(int(ring["Fp[e]"])))
    raise ValueError("unknown ring tag: %r" % (ring,))


def ring_tag(field):
    if isinstance(field, RationalField):
        return "Q"
    if isinstance(field, PrimeField):
        return {"Fp": field.p}
    if isinstance(field, DualNumbers):
        base = ring_tag(field.base)
        return "Q[e]" if base == "Q" else {"Fp[e]": field.base.p}
    raise ValueError("unknown field %r" % (field,))


class SparseMatrix:
    """Immutable-by-convention sparse matrix over an exact field.

    Entries live in a dict keyed by (row, col); zeros are never stored.
    """

    def __init__(self, rows, cols, field, entries=None):
        self.rows = rows
        self.cols = cols
        self.field = field
        self.data = {}
        if entries:
            for (i, j), v in entries.items() if isinstance(entries, dict) else entries:
                self.add_entry(i, j, v)

    def add_entry(self, i, j, v):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError("entry (%d,%d) out of range" % (i, j))
        key = (i, j)
        cur = self.data.get(key)
        if cur is not None:
            v = self.field.add(cur, v)
        if self.field.is_zero(v):
            self.data.pop(key, None)
        else:
            self.data[key] = v

    def get(self, i, j):
        return self.data.get((i, j), self.field.zero)

    @property
    def nnz(self):
        return len(self.data)

    def is_zero(self):
        return not self.data

    def copy(self):
        m = SparseMatrix(self.rows, self.cols, self.field)
        m.data = dict(self.data)
        return m

    def row_lists(self):
        rows = [dict() for _ in range(self.rows)]
        for (i, j), v in self.data.items():
            rows[i][j] = v
        return rows

    def col_lists(self):
        cols = [dict() for _ in range(self.cols)]
        for (i, j), v in self.data.items():
            cols[j][i] = v
        return cols

    def matvec(self, vec):
        F = self.field
        out = [F.zero] * self.rows
        for (i, j), v in self.data.items():
            x = vec[j]
            if not F.is_zero(x):
                out[i] = F.add(out[i], F.mul(v, x))
        return out

    def mul(self, other):
        """Sparse product self * other."""
        if other.rows != self.cols:
            raise ValueError("shape mismatch in matrix product")
        F = self.field
        cols_of_self = [dict() for _ in range(self.cols)]
        for (i, j), v in self.data.items():
            cols_of_self[j][i] = v
        out = SparseMatrix(self.rows, other.cols, F)
        acc = {}
        by_col = {}
        for (k, j), w in other.data.items():
            by_col.setdefault(j, []).append((k, w))
        for j, col in by_col.items():
            acc.clear()
            for k, w in col:
                for i, v in cols_of_self[k].items():
                    key = i
                    cur = acc.get(key, F.zero)
                    acc[key] = F.add(cur, F.mul(v, w))
            for i, v in acc.items():
                if not F.is_zero(v):
                    out.data[(i, j)] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        if set(self.data) != set(other.data):
            return False
        return all(self.field.eq(v, other.data[k]) for k, v in self.data.items())

    def _echelon(self):
        """Row echelon data: dict pivot col -> row dict with pivot value 1.

        Over a field every nonzero entry can pivot; over dual numbers the
        leading entry may be non-invertible, in which case the next
        invertible one in the row is used (enough for the solves the
        deformation checks need).
        """
        F = self.field
        rows = [r for r in self.row_lists() if r]
        rows.sort(key=len)
        pivots = {}  # col -> row dict, pivot normalized to 1
        for r in rows:
            r = dict(r)
            while r:
                c = None
                for j in sorted(r):
                    if j not in pivots:
                        try:
                            inv = F.inv(r[j])
                        except ZeroDivisionError:
                            continue
                        c = j
                        break
                    c = j
                    break
                if c is None:
                    raise ValueError("elimination stuck: no invertible pivot in row")
                p = pivots.get(c)
                if p is None:
                    r = {j: F.mul(inv, v) for j, v in r.items()}
                    pivots[c] = r
                    break
                coef = r[c]
                for j, v in p.items():
                    w = F.sub(r.get(j, F.zero), F.mul(coef, v))
                    if F.is_zero(w):
                        r.pop(j, None)
                    else:
                        r[j] = w
        return pivots

    def rank(self):
        return len(self._echelon())

    def rref_pivots(self):
        """Fully reduced pivot rows, as a dict col -> row dict."""
        F = self.field
        pivots = self._echelon()
        cols = sorted(pivots)
        # back-substitute from the rightmost pivot
        for idx in range(len(cols) - 1, -1, -1):
            c = cols[idx]
            row = pivots[c]
            for c2 in cols[:idx]:
                upper = pivots[c2]
                coef = upper.get(c)
                if coef is None or F.is_zero(coef):
                    continue
                for j, v in row.items():
                    w = F.sub(upper.get(j, F.zero), F.mul(coef, v))
                    if F.is_zero(w):
                        upper.pop(j, None)
                    else:
                        upper[j] = w
        return pivots

    def kernel_basis(self):
        """Basis of the null space; length = cols - rank."""
        F = self.field
        pivots = self.rref_pivots()
        pivot_cols = set(pivots)
        free_cols = [j for j in range(self.cols) if j not in pivot_cols]
        basis = []
        for f in free_cols:
            vec = [F.zero] * self.cols
            vec[f] = F.one
            for c, row in pivots.items():
                coef = row.get(f)
                if coef is not None:
                    vec[c] = F.neg(coef)
            basis.append(vec)
        return basis

    def solve(self, b):
        """One solution x of self * x = b, or None if inconsistent."""
        F = self.field
        aug = SparseMatrix(self.rows, self.cols + 1, F)
        aug.data = dict(self.data)
        for i, v in enumerate(b):
            if not F.is_zero(v):
                aug.data[(i, self.cols)] = v
        pivots = aug.rref_pivots()
        if self.cols in pivots:
            return None
        x = [F.zero] * self.cols
        for c, row in pivots.items():
            x[c] = row.get(self.cols, F.zero)
        return x

    # -- triplet text format ------------------------------------------------

    def to_triplet_text(self):
        """First line "rows cols nnz", then one "i j value" line per entry."""
        lines = ["%d %d %d" % (self.rows, self.cols, self.nnz)]
        for (i, j) in sorted(self.data):
            lines.append("%d %d %s" % (i, j, self.field.show(self.data[(i, j)])))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_triplet_text(cls, text, field):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        rows, cols, nnz = (int(t) for t in lines[0].split())
        m = cls(rows, cols, field)
        for ln in lines[1:]:
            i, j, val = ln.split(None, 2)
            m.add_entry(int(i), int(j), field.parse(val))
        if m.nnz != nnz:
            raise ValueError("triplet header nnz %d != %d entries" % (nnz, m.nnz))
        return m


def betti(d_in, d_out):
    """dim ker(d_out) - rank(d_in) at a complex position.

    d_in maps into the space, d_out maps out of it; rejects pairs whose
    composite is not zero.
    """
    if d_in.cols != 0 and d_out.cols != d_in.rows:
        raise ValueError("d_out and d_in do not share the middle space")
    if d_in.cols != 0 and not d_out.mul(d_in).is_zero():
        raise ValueError("d_out . d_in != 0: not a complex position")
    return (d_out.cols - d_out.rank()) - d_in.rank()


def zero_matrix(rows, cols, field):
    return SparseMatrix(rows, cols, field)


def vec_is_zero(field, vec):
    return all(field.is_zero(v) for v in vec)


def vec_sub(field, a, b):
    return [field.sub(x, y) for x, y in zip(a, b)]
