"""Jordan decomposition of an integral symmetric 3x3 matrix over Z_q.

For odd q the output is a diagonal splitting <q^a1 u1, q^a2 u2, q^a3 u3>
together with the unimodular transform certifying congruence modulo q^K.
For q = 2 the splitting may contain improper 2x2 blocks of type A(2,2) or
A(0,0); only the invariants consumed downstream (scales, determinant
classes, diagonal parity) are exposed.
"""

from dataclasses import dataclass, field

from . import intmath
from .errors import PrecisionTooLow


@dataclass(frozen=True)
class JordanComponent:
    """One Jordan block: scale exponent plus its unimodular content.

    kind is "unit" (rank-1 diagonal block with odd-q or 2-adic unit) or
    "A22" / "A00" (rank-2 improper blocks at q = 2).
    """

    exponent: int
    kind: str
    units: tuple = ()

    @property
    def rank(self):
        return 1 if self.kind == "unit" else 2


@dataclass(frozen=True)
class JordanSplitting:
    prime: int
    precision: int
    components: tuple
    transform: tuple = field(compare=False, default=())

    def diagonal(self):
        """Diagonal entries q^a * u in block order (unit blocks only)."""
        if any(c.kind != "unit" for c in self.components):
            raise ValueError("splitting has improper blocks")
        return tuple(self.prime**c.exponent * c.units[0] for c in self.components)

    def exponents(self):
        out = []
        for c in self.components:
            out.extend([c.exponent] * c.rank)
        return tuple(out)

    def unit_block_units(self):
        return tuple(c.units[0] for c in self.components if c.kind == "unit")


def _minimal_entry(m, active, q):
    """Position (i, j) of an active entry with minimal q-valuation.

    Diagonal positions win ties so odd-q pivoting can always stay proper.
    """
    best, best_pos = None, None
    for i in active:
        v = m[i][i]
        if v != 0:
            val = intmath.valuation(v, q)
            if best is None or val < best:
                best, best_pos = val, (i, i)
    for i in active:
        for j in active:
            if j <= i:
                continue
            v = m[i][j]
            if v != 0:
                val = intmath.valuation(v, q)
                if best is None or val < best:
                    best, best_pos = val, (i, j)
    return best, best_pos


def _sym_apply(m, t, size, mod):
    """Replace m by t^T m t modulo mod (t given as a full size x size list)."""
    n = len(m)
    tmp = [[sum(t[k][i] * m[k][l] for k in range(n)) % mod for l in range(n)]
           for i in range(n)]
    return [[sum(tmp[i][k] * t[k][j] for k in range(n)) % mod for j in range(n)]
            for i in range(n)]


def jordan_split(gram, q, precision=None):
    """Jordan splitting of the Gram matrix over Z_q at the given precision.

    The returned transform T is an integer matrix with det(T) a q-adic unit
    such that T^T G T is congruent to the block-diagonal splitting modulo
    q^precision.  Exponent multisets and unit square classes are canonical
    at odd q; at q = 2 improper blocks are classified as A(2,2) or A(0,0)
    by their unit determinant modulo 8.
    """
    rows = gram.rows if hasattr(gram, "rows") else gram
    m = [list(r) for r in rows]
    n = len(m)
    det = _det(m)
    if det == 0:
        raise ValueError("jordan_split needs a nondegenerate matrix")
    dval = intmath.valuation(det, q)
    min_precision = dval + 3
    if precision is None:
        precision = min_precision
    if precision < min_precision:
        raise PrecisionTooLow(
            f"precision {precision} < ord_{q}(det) + 3 = {min_precision}")

    # working precision: enough slack that every exact division below stays
    # certified after accumulated pivot scaling
    work = precision + 2 * dval + 4
    mod = q**work
    t_total = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    m = [[v % mod for v in row] for row in m]
    active = list(range(n))
    components = []

    while active:
        val, pos = _minimal_entry(m, active, q)
        if pos is None:
            raise PrecisionTooLow("pivoting found no nonzero entry")
        i, j = pos
        if i == j or q != 2:
            if i != j:
                # odd q: move the off-diagonal minimum onto the diagonal
                # (x_i -> x_i + x_j keeps integrality and det class)
                t = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
                t[j][i] = 1
                m = _sym_apply(m, t, n, mod)
                t_total = _mat_mul(t_total, t, mod)
                if intmath.valuation(m[i][i], q) != val:
                    raise PrecisionTooLow("pivot transfer lost the minimum")
            piv = m[i][i]
            unit = piv // q**val
            inv = pow(unit, -1, q ** (work - val))
            t = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
            for k in active:
                if k == i:
                    continue
                # m[i][k] is divisible by q^val by minimality
                t[i][k] = (-(m[i][k] // q**val) * inv) % (q ** (work - val))
            m = _sym_apply(m, t, n, mod)
            t_total = _mat_mul(t_total, t, mod)
            components.append((val, (i,), (unit % q ** max(1, precision - val),)))
            active.remove(i)
        else:
            # q = 2, minimal valuation only off-diagonal: improper 2x2 block
            a, b = i, j
            blk = [[m[a][a], m[a][b]], [m[a][b], m[b][b]]]
            bdet = blk[0][0] * blk[1][1] - blk[0][1] ** 2
            bval = 2 * val
            if intmath.valuation(bdet, 2) != bval:
                raise PrecisionTooLow("improper block determinant degenerate")
            unit_det = (bdet // 2**bval) % 8
            kind = "A00" if unit_det % 8 == 7 else "A22"
            inv_det = pow(bdet // 2**bval, -1, 2 ** (work - bval))
            t = [[1 if x == y else 0 for y in range(n)] for x in range(n)]
            for k in active:
                if k in (a, b):
                    continue
                # solve blk * (xa, xb) = (m[a][k], m[b][k]) 2-adically
                na = blk[1][1] * m[a][k] - blk[0][1] * m[b][k]
                nb = blk[0][0] * m[b][k] - blk[0][1] * m[a][k]
                if na % 2**bval or nb % 2**bval:
                    raise PrecisionTooLow("improper elimination not integral")
                t[a][k] = (-(na // 2**bval) * inv_det) % (2 ** (work - bval))
                t[b][k] = (-(nb // 2**bval) * inv_det) % (2 ** (work - bval))
            m = _sym_apply(m, t, n, mod)
            t_total = _mat_mul(t_total, t, mod)
            red = 2 ** max(1, precision - val)
            raw = (blk[0][0] // 2**val % red, blk[0][1] // 2**val % red,
                   blk[1][1] // 2**val % red)
            components.append((val, (a, b), raw, kind))
            active.remove(a)
            active.remove(b)

    comps = []
    perm = []
    for entry in sorted(components, key=lambda c: (c[0], c[1])):
        if len(entry) == 3:
            val, idx, units = entry
            comps.append(JordanComponent(val, "unit", units))
        else:
            val, idx, units, kind = entry
            comps.append(JordanComponent(val, kind, units))
        perm.extend(idx)
    # permute transform columns so block k of the splitting sits at slot k
    t_final = [[t_total[i][perm[j]] for j in range(n)] for i in range(n)]
    return JordanSplitting(q, precision, tuple(comps),
                           tuple(tuple(r) for r in t_final))


def _det(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _mat_mul(a, b, mod):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) % mod for j in range(n)]
            for i in range(n)]


def split_blocks_matrix(splitting, canonical=False):
    """Block-diagonal integer matrix reassembled from the splitting.

    Improper blocks appear with their raw entries (what the transform
    certifies); pass canonical=True for the A(2,2)/A(0,0) model blocks,
    which are Z_2-congruent to the raw ones.
    """
    q = splitting.prime
    size = sum(c.rank for c in splitting.components)
    m = [[0] * size for _ in range(size)]
    pos = 0
    for c in splitting.components:
        s = q**c.exponent
        if c.kind == "unit":
            m[pos][pos] = s * c.units[0]
        elif canonical:
            if c.kind == "A22":
                m[pos][pos] = m[pos + 1][pos + 1] = 2 * s
            m[pos][pos + 1] = m[pos + 1][pos] = s
        else:
            m[pos][pos] = s * c.units[0]
            m[pos][pos + 1] = m[pos + 1][pos] = s * c.units[1]
            m[pos + 1][pos + 1] = s * c.units[2]
        pos += c.rank
    return m
