"""Regenerates fixtures/paper from first principles.

Everything here is computed straight from the definitions with Python
fractions (and sympy for Jordan forms), independently of the Rust code. The
worked examples are also checked against their closed-form entry
formulas before anything is written.

    python3 fixtures/generate.py
"""

import itertools
import json
from fractions import Fraction
from pathlib import Path

import sympy

ROOT = Path(__file__).resolve().parent / "paper"
INPUTS = ROOT / "inputs"
EXPECTED = ROOT / "expected"


# ---- scalars ---------------------------------------------------------------

def frac(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def gq(z):
    return {"re": frac(z), "im": "0/1"}


def cf(z):
    return {"re": float(z), "im": 0.0}


# ---- index sets ------------------------------------------------------------

def colex(dims):
    """Points of the rectangle in canonical order: last coordinate slowest."""
    return [tuple(reversed(p)) for p in itertools.product(*[range(n) for n in reversed(dims)])]


def pure(factors):
    dims = [len(f) for f in factors]
    pts = colex(dims)
    t = {}
    for r in pts:
        for c in pts:
            v = Fraction(1)
            for f, i, j in zip(factors, r, c):
                v *= Fraction(f[i][j])
            t[(r, c)] = v
    return dims, pts, t


def stretch(pts, t, f):
    labels = sorted({f(p) for p in pts})
    pos = {v: k for k, v in enumerate(labels)}
    m = [[Fraction(0)] * len(labels) for _ in labels]
    for r in pts:
        for c in pts:
            m[pos[f(r)]][pos[f(c)]] += t[(r, c)]
    return labels, m


def stretch_vec(pts, x, f):
    labels = sorted({f(p) for p in pts})
    v = [Fraction(0)] * len(labels)
    for p in pts:
        v[labels.index(f(p))] += x[p]
    return labels, v


def convolve(pts, t1, t2, f):
    return {
        (i, j): sum((t1[(i, m)] * t2[(n, j)] for m in pts for n in pts if f(m) == f(n)), Fraction(0))
        for i in pts
        for j in pts
    }


def act(pts, t, x, f):
    return {i: sum((t[(i, j)] * x[l] for j in pts for l in pts if f(j) == f(l)), Fraction(0)) for i in pts}


def average(pts, t, f, normalized):
    out = {}
    for i in pts:
        for j in pts:
            block = [t[(m, n)] for m in pts if f(m) == f(i) for n in pts if f(n) == f(j)]
            s = sum(block, Fraction(0))
            out[(i, j)] = s / len(block) if normalized else s
    return out


# ---- JSON documents --------------------------------------------------------

def rect(dims):
    return {"kind": "rectangular", "dims": list(dims)}


def tensor_doc(dims, pts, t, enc=gq, tag="gq"):
    entries = [
        {"row": list(r), "col": list(c), "value": enc(t[(r, c)])}
        for r in pts
        for c in pts
        if t[(r, c)] != 0
    ]
    return {"index_set": rect(dims), "scalar": tag, "entries": entries}


def vector_doc(dims, pts, x):
    entries = [{"point": list(p), "value": gq(x[p])} for p in pts if x[p] != 0]
    return {"index_set": rect(dims), "scalar": "gq", "entries": entries}


def matrix_doc(labels, m, enc=gq, tag="gq"):
    return {
        "rows": len(m),
        "cols": len(m),
        "scalar": tag,
        "data": [[enc(v) for v in row] for row in m],
        "row_labels": labels,
        "col_labels": labels,
    }


def linear(k):
    return lambda p: sum(a * b for a, b in zip(k, p))


def mixed_radix(dims):
    def f(p):
        v, stride = 0, 1
        for i, n in zip(p, dims):
            v += i * stride
            stride *= n
        return v
    return f


# ---- Jordan forms via sympy ------------------------------------------------

def jordan_block(size, ev):
    return sympy.Matrix(size, size, lambda i, j: ev if i == j else (1 if j == i + 1 else 0))


def jordan_blocks(m):
    _, j = m.jordan_form()
    n = j.shape[0]
    blocks, start = [], 0
    for k in range(n):
        if k == n - 1 or j[k, k + 1] == 0:
            blocks.append((k - start + 1, sympy.nsimplify(j[start, start])))
            start = k + 1
    return blocks


def spec_doc(blocks):
    def key(b):
        size, ev = b
        re, im = sympy.re(ev), sympy.im(ev)
        return (Fraction(str(re)), Fraction(str(im)), -size)
    out = []
    for size, ev in sorted(blocks, key=key):
        re, im = Fraction(str(sympy.re(ev))), Fraction(str(sympy.im(ev)))
        out.append({"size": size, "eigenvalue": {"re": frac(re), "im": frac(im)}})
    return {"blocks": out}


def spec_matrix(spec):
    return sympy.diag(*[jordan_block(s, sympy.Rational(e)) for s, e in spec])


def nfold_blocks(specs):
    m = spec_matrix(specs[0])
    for s in specs[1:]:
        m = sympy.kronecker_product(m, spec_matrix(s))
    return jordan_blocks(m)


def input_spec(specs):
    return [{"blocks": [{"size": s, "eigenvalue": {"re": frac(e), "im": "0/1"}} for s, e in spec]} for spec in specs]


# ---- cases -----------------------------------------------------------------

CASES = []


def write(rel, doc):
    path = ROOT / rel
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return rel


def case(name, args, expected=None, exit_code=0):
    entry = {"name": name, "args": args, "exit": exit_code}
    if expected is not None:
        entry["expected"] = write(f"expected/{name}.json", expected)
    CASES.append(entry)


A = [[1, 2], [3, 4]]
B = [[5, 6], [7, 8]]


def a_(i, j):
    return Fraction(A[i][j])


def b_(i, j):
    return Fraction(B[i][j])


def sum_map_examples():
    dims, pts, t = pure([A, B])
    write("inputs/ab_tensor.json", tensor_doc(dims, pts, t))
    write("inputs/ab_tensor_cf64.json", tensor_doc(dims, pts, t, cf, "cf64"))
    write("inputs/map_k11.json", {"kind": "linear", "k": [1, 1]})
    labels, m = stretch(pts, t, linear((1, 1)))
    a, b = a_, b_
    display = [
        [a(0, 0) * b(0, 0), a(0, 1) * b(0, 0) + a(0, 0) * b(0, 1), a(0, 1) * b(0, 1)],
        [a(0, 0) * b(1, 0) + a(1, 0) * b(0, 0),
         a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0) + a(0, 1) * b(1, 0) + a(1, 0) * b(0, 1),
         a(0, 1) * b(1, 1) + a(1, 1) * b(0, 1)],
        [a(1, 0) * b(1, 0), a(1, 0) * b(1, 1) + a(1, 1) * b(1, 0), a(1, 1) * b(1, 1)],
    ]
    assert m == display and m[1][1] == 60 and labels == [0, 1, 2]
    case("k11_stretch", ["stretch", "--tensor", "inputs/ab_tensor.json", "--map", "inputs/map_k11.json"],
         matrix_doc(labels, m))
    case("k11_stretch_cf64", ["stretch", "--tensor", "inputs/ab_tensor_cf64.json", "--map", "inputs/map_k11.json"],
         matrix_doc(labels, m, cf, "cf64"))

    lam, mu = Fraction(2), Fraction(3)
    dims, pts, t = pure([[[lam, 1], [0, lam]], [[mu, 1], [0, mu]]])
    write("inputs/jordan_2x2_tensor.json", tensor_doc(dims, pts, t))
    labels, m = stretch(pts, t, linear((1, 1)))
    assert m == [[lam * mu, lam + mu, 1], [0, 2 * lam * mu, lam + mu], [0, 0, lam * mu]]
    case("jordan_2x2_instance",
         ["stretch", "--tensor", "inputs/jordan_2x2_tensor.json", "--map", "inputs/map_k11.json"],
         matrix_doc(labels, m))

    # Convolution and action under the same map.
    C = [[1, 0], [2, 1]]
    D = [[0, 1], [1, 1]]
    _, _, t1 = pure([A, B])
    _, _, t2 = pure([C, D])
    write("inputs/cd_tensor.json", tensor_doc(dims, pts, t2))
    f = linear((1, 1))
    conv = convolve(pts, t1, t2, f)
    case("k11_convolve",
         ["convolve", "--left", "inputs/ab_tensor.json", "--right", "inputs/cd_tensor.json",
          "--map", "inputs/map_k11.json"],
         tensor_doc(dims, pts, conv))
    # The homomorphism property, checked on the fixture itself.
    _, m1 = stretch(pts, t1, f)
    _, m2 = stretch(pts, t2, f)
    _, m12 = stretch(pts, conv, f)
    assert m12 == [[sum(m1[i][k] * m2[k][j] for k in range(3)) for j in range(3)] for i in range(3)]

    x = {p: Fraction(k + 1, 2) for k, p in enumerate(pts)}
    write("inputs/half_steps_vector.json", vector_doc(dims, pts, x))
    case("k11_act",
         ["act", "--tensor", "inputs/ab_tensor.json", "--vector", "inputs/half_steps_vector.json",
          "--map", "inputs/map_k11.json"],
         vector_doc(dims, pts, act(pts, t1, x, f)))

    e = {p: Fraction(0) for p in pts}
    e[(0, 1)] = Fraction(1)
    e[(1, 0)] = Fraction(1)
    write("inputs/vector_e01_plus_e10.json", vector_doc(dims, pts, e))
    labels, v = stretch_vec(pts, e, f)
    assert v == [0, 2, 0]
    case("stretch_vector_class_sum",
         ["stretch-vector", "--vector", "inputs/vector_e01_plus_e10.json", "--map", "inputs/map_k11.json"],
         {"n": 3, "scalar": "gq", "data": [gq(z) for z in v], "labels": labels})

    for normalized in (True, False):
        name = "k11_average" if normalized else "k11_average_raw"
        args = ["average", "--tensor", "inputs/ab_tensor.json", "--map", "inputs/map_k11.json"]
        case(name, args + ([] if normalized else ["--raw"]),
             tensor_doc(dims, pts, average(pts, t1, f, normalized)))


def difference_map_examples():
    dims, pts, t = pure([A, B])
    write("inputs/map_k1m1.json", {"kind": "linear", "k": [1, -1]})
    labels, m = stretch(pts, t, linear((1, -1)))
    a, b = a_, b_
    display = [
        [a(0, 0) * b(1, 1), a(0, 0) * b(1, 0) + a(0, 1) * b(1, 1), a(0, 1) * b(1, 0)],
        [a(0, 0) * b(0, 1) + a(1, 0) * b(1, 1),
         a(0, 0) * b(0, 0) + a(1, 1) * b(1, 1) + a(0, 1) * b(0, 1) + a(1, 0) * b(1, 0),
         a(0, 1) * b(0, 0) + a(1, 1) * b(1, 0)],
        [a(1, 0) * b(0, 1), a(1, 0) * b(0, 0) + a(1, 1) * b(0, 1), a(1, 1) * b(0, 0)],
    ]
    assert m == display and labels == [-1, 0, 1]
    case("k1m1_stretch", ["stretch", "--tensor", "inputs/ab_tensor.json", "--map", "inputs/map_k1m1.json"],
         matrix_doc(labels, m))

    lam, mu = Fraction(2), Fraction(3)
    dims, pts, t = pure([[[lam, 1], [0, lam]], [[mu, 1], [0, mu]]])
    labels, m = stretch(pts, t, linear((1, -1)))
    assert m == [[lam * mu, mu, 0], [lam, 2 * lam * mu + 1, mu], [0, lam, lam * mu]]
    case("k1m1_jordan_instance",
         ["stretch", "--tensor", "inputs/jordan_2x2_tensor.json", "--map", "inputs/map_k1m1.json"],
         matrix_doc(labels, m))


def place(block, at, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    r0, c0 = at
    for i, row in enumerate(block):
        for j, v in enumerate(row):
            m[r0 + i][c0 + j] += Fraction(v)
    return m


def sum_map_2x3_example():
    B3 = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
    dims, pts, t = pure([A, B3])
    write("inputs/ab_2x3_tensor.json", tensor_doc(dims, pts, t))
    labels, m = stretch(pts, t, linear((1, 1)))
    display = [[Fraction(0)] * 4 for _ in range(4)]
    for (i, j) in itertools.product(range(2), repeat=2):
        shifted = place(B3, (i, j), 4)
        for r in range(4):
            for c in range(4):
                display[r][c] += a_(i, j) * shifted[r][c]
    assert m == display and labels == [0, 1, 2, 3]
    case("k11_2x3_stretch", ["stretch", "--tensor", "inputs/ab_2x3_tensor.json", "--map", "inputs/map_k11.json"],
         matrix_doc(labels, m))


def max_map_example():
    dims, pts, t = pure([A, B])
    write("inputs/map_max.json", {"kind": "max"})
    labels, m = stretch(pts, t, max)
    a, b = a_, b_
    bm = [[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]]
    terms = [
        (a(0, 0), bm),
        (a(0, 1), [[0, b(0, 0) + b(0, 1)], [0, b(1, 0) + b(1, 1)]]),
        (a(1, 0), [[0, 0], [b(0, 0) + b(1, 0), b(0, 1) + b(1, 1)]]),
        (a(1, 1), [[0, 0], [0, b(0, 0) + b(1, 0) + b(0, 1) + b(1, 1)]]),
    ]
    display = [[sum(c * Fraction(mat[r][s]) for c, mat in terms) for s in range(2)] for r in range(2)]
    assert m == display and labels == [0, 1]
    case("max_stretch", ["stretch", "--tensor", "inputs/ab_tensor.json", "--map", "inputs/map_max.json"],
         matrix_doc(labels, m))


def tensor_product_cases():
    dims, pts, t = pure([[[1, 0], [0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]]])
    write("inputs/identity_2x3.json", tensor_doc(dims, pts, t))
    write("inputs/map_mixed_radix.json", {"kind": "mixed-radix"})
    labels, m = stretch(pts, t, mixed_radix(dims))
    assert m == [[Fraction(int(i == j)) for j in range(6)] for i in range(6)]
    case("tp_identity", ["stretch", "--tensor", "inputs/identity_2x3.json", "--map", "inputs/map_mixed_radix.json"],
         matrix_doc(labels, m))

    f = linear((1, 1))
    sq = [2, 2]
    _, pts2, ident = pure([[[1, 0], [0, 1]], [[1, 0], [0, 1]]])
    write("inputs/identity_2x2.json", tensor_doc(sq, pts2, ident))
    case("kappa_identity_injective",
         ["kappa", "--tensor", "inputs/identity_2x2.json", "--map", "inputs/map_mixed_radix.json"],
         {"kappa": gq(1), "scalar": "gq"})
    # Under a non-injective map the identity stretches to diag(class sizes).
    _, m = stretch(pts2, ident, f)
    assert m == [[1, 0, 0], [0, 2, 0], [0, 0, 1]]
    case("kappa_identity_k11",
         ["kappa", "--tensor", "inputs/identity_2x2.json", "--map", "inputs/map_k11.json"],
         {"kappa": gq(2), "scalar": "gq"})

    dims, pts, t = pure([A, B])
    case("average_injective",
         ["average", "--tensor", "inputs/ab_tensor.json", "--map", "inputs/map_mixed_radix.json"],
         tensor_doc(dims, pts, t))

    B1, B2, B3 = [[1, 2], [0, 3]], [[0, 1], [4, 5]], [[2, 0], [1, 7]]
    dims, pts, t = pure([B1, B2, B3])
    write("inputs/tp3_tensor.json", tensor_doc(dims, pts, t))
    rdims, rpts, rt = pure([B3, B2, B1])
    write("inputs/tp3_reversed_tensor.json", tensor_doc(rdims, rpts, rt))
    labels, m = stretch(rpts, rt, mixed_radix(rdims))
    case("permute_reversal",
         ["permute", "--tensor", "inputs/tp3_tensor.json", "--map", "inputs/map_mixed_radix.json", "--sigma", "3,2,1"],
         matrix_doc(labels, m))
    case("stretch_reversed_factors",
         ["stretch", "--tensor", "inputs/tp3_reversed_tensor.json", "--map", "inputs/map_mixed_radix.json"],
         matrix_doc(labels, m))

    case("permute_outside_domain",
         ["permute", "--tensor", "inputs/ab_2x3_tensor.json", "--map", "inputs/map_k11.json", "--sigma", "2,1"],
         exit_code=4)


def witness_cases():
    write("inputs/map_table_cycle.json", {
        "kind": "table",
        "pairs": [{"point": [0], "value": 2}, {"point": [1], "value": 0}, {"point": [2], "value": 1}],
        "index_set": rect([3]),
    })
    # Point k is row k of the mixed-radix stretch and row rank(F(k)) of the table's.
    values = [2, 0, 1]
    perm = [sorted(values).index(v) for v in values]
    case("tp_witness_cycle", ["tp-witness", "--map", "inputs/map_table_cycle.json"],
         {"check": "tp-similarity", "passed": True, "details": {"permutation": perm, "labels": sorted(values)}})

    write("inputs/map_k12_on_2x2.json", {"kind": "linear", "k": [1, 2], "index_set": rect([2, 2])})
    pts = colex([2, 2])
    values = [linear((1, 2))(p) for p in pts]
    perm = [sorted(values).index(v) for v in values]
    case("tp_witness_linear", ["tp-witness", "--map", "inputs/map_k12_on_2x2.json"],
         {"check": "tp-similarity", "passed": True, "details": {"permutation": perm, "labels": sorted(values)}})

    write("inputs/map_k11_on_2x2.json", {"kind": "linear", "k": [1, 1], "index_set": rect([2, 2])})
    case("tp_witness_not_injective", ["tp-witness", "--map", "inputs/map_k11_on_2x2.json"], exit_code=3)


def jordan_cases():
    inputs = {
        "jordan_j2_2_j2_3": [[(2, 2)], [(2, 3)]],
        "jordan_single": [[(1, 1)]],
        "jordan_j2_1_j2_0": [[(2, 1)], [(2, 0)]],
        "jordan_j2_1_j3_0": [[(2, 1)], [(3, 0)]],
        "jordan_three_factors": [[(2, 2)], [(2, 3)], [(1, 1)]],
        "jordan_mixed_sums": [[(2, 1), (1, -1)], [(2, 0), (1, 2)]],
    }
    for name, specs in inputs.items():
        write(f"inputs/{name}.json", input_spec(specs))
        expected = spec_doc(nfold_blocks(specs))
        case(name + "_verify", ["jordan", "--spec", f"inputs/{name}.json", "--verify"],
             {"closed_form": expected, "oracle": expected, "agree": True})
        case(name, ["jordan", "--spec", f"inputs/{name}.json"], {"closed_form": expected})

    # Spot checks against the stated cases.
    assert spec_doc(nfold_blocks(inputs["jordan_j2_2_j2_3"]))["blocks"] == [
        {"size": 3, "eigenvalue": {"re": "6/1", "im": "0/1"}},
        {"size": 1, "eigenvalue": {"re": "6/1", "im": "0/1"}},
    ]
    assert [b["size"] for b in spec_doc(nfold_blocks(inputs["jordan_j2_1_j2_0"]))["blocks"]] == [2, 2]

    write("inputs/jordan_float.json", [{"blocks": [{"size": 2, "eigenvalue": {"re": 2.0, "im": 0.0}}]}])
    case("jordan_float_rejected", ["jordan", "--spec", "inputs/jordan_float.json", "--verify"], exit_code=5)


def error_cases():
    write("inputs/tensor_outside.json", {
        "index_set": rect([2]),
        "scalar": "gq",
        "entries": [{"row": [0], "col": [3], "value": {"re": "1/1", "im": "0/1"}}],
    })
    case("tensor_entry_outside_domain",
         ["stretch", "--tensor", "inputs/tensor_outside.json", "--map", "inputs/map_k11.json"], exit_code=3)
    (INPUTS / "not_json.json").write_text("{ \"index_set\": \n")
    case("malformed_json", ["stretch", "--tensor", "inputs/not_json.json", "--map", "inputs/map_k11.json"],
         exit_code=2)
    write("inputs/map_k11_on_3x3.json", {"kind": "linear", "k": [1, 1], "index_set": rect([3, 3])})
    case("map_index_set_mismatch",
         ["stretch", "--tensor", "inputs/ab_tensor.json", "--map", "inputs/map_k11_on_3x3.json"], exit_code=3)
    case("mixed_scalar_kinds",
         ["convolve", "--left", "inputs/ab_tensor.json", "--right", "inputs/ab_tensor_cf64.json",
          "--map", "inputs/map_k11.json"], exit_code=5)
    write("inputs/tensor_bad_fraction.json", {
        "index_set": rect([1]),
        "scalar": "gq",
        "entries": [{"row": [0], "col": [0], "value": {"re": "1/0", "im": "0/1"}}],
    })
    case("zero_denominator",
         ["stretch", "--tensor", "inputs/tensor_bad_fraction.json", "--map", "inputs/map_mixed_radix.json"],
         exit_code=2)
    case("unknown_suite", ["verify", "no-such-suite"], exit_code=2)


def main():
    INPUTS.mkdir(parents=True, exist_ok=True)
    EXPECTED.mkdir(parents=True, exist_ok=True)
    sum_map_examples()
    difference_map_examples()
    sum_map_2x3_example()
    max_map_example()
    tensor_product_cases()
    witness_cases()
    jordan_cases()
    error_cases()
    write("cases.json", CASES)
    print(f"wrote {len(CASES)} cases to {ROOT}")


if __name__ == "__main__":
    main()
