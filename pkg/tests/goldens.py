"""Printed key pairs and listings used as fixed oracles.

Polynomials are written in the frontend expression syntax and parsed with
``parse_polymap``; the variable names follow the original listings.
"""

from tamefhe.automorphism import AutomorphismPair
from tamefhe.frontend import parse_polymap, parse_program

XS2 = ["X1", "X2"]
YS2 = ["Y1", "Y2"]
XS4 = ["X1", "X2", "X3", "X4"]

# printed add/multiply key: φ and ψ for the add/multiply program
FIRST_PHI = ["-X1 - 3*X2 + 2*X2^2", "2*X1 + 5*X2 - 4*X2^2"]
FIRST_PSI = ["5*X1 + 3*X2 + 8*X1^2 + 8*X1*X2 + 2*X2^2", "-2*X1 - X2"]

# small worked pair with n = 2, d = 2, b = 3
SMALL_PHI = ["-X2 + X1^2 + 2*X1*X2 + X2^2 - 2*X1", "-2*X2 + X1^2 + 2*X1*X2 + X2^2 - 3*X1"]
SMALL_PSI = ["-2*X1 + X1^2 - 2*X1*X2 + X2^2 + X2", "3*X1 - X1^2 + 2*X1*X2 - X2^2 - 2*X2"]

# worked pair with b = 10^12
BIG_PHI = [
    "-2331187*X1 + 2246855*X2 + 14309229798*X1^2 - 27583166484*X1*X2 + 13292662918*X2^2",
    "-6593429*X1 + 6354908*X2 + 40471627563*X1^2 - 78015075354*X1*X2 + 37596412283*X2^2",
]
BIG_PSI = [
    "-6354908*X1 + 2246855*X2 - 38201180309*X1^2 + 27012971828*X1*X2 - 4775380244*X2^2",
    "-6593429*X1 + 2331187*X2 - 39635004771*X1^2 + 28026863532*X1*X2 - 4954617036*X2^2",
]

# 4-variable pair printed with the version 2 listing (known not to be inverse)
LISTED4_PHI = [
    "-4 - X2 - 2*X2*X4 - 2*X3*X4",
    "X4 - X1 - X3 + 1",
    "4 + X2 + 2*X2*X4 + 2*X3*X4 - X4",
    "1 + X4 - X1 - 2*X2 - 2*X3",
]
LISTED4_PSI = [
    "1 - 2*X2 + X4 - X1 - X3",
    "-X1 - 4 - 2*X1*X4 + 2*X1*X2 - 2*X3*X4 + 2*X2*X3",
    "X1 + 4 - X4 + X2 + 2*X1*X4 - 2*X1*X2 + 2*X3*X4 - 2*X2*X3",
    "-X1 - X3",
]

# temp1/temp2 of E(fun1); the Y1^4*Y2 term carries a sign erratum (+1664 / -3328)
TEMP1 = (
    "1664*Y1^4*Y2 + 1728*Y1^3*Y2^2 + 1536*Y1^5*Y2 + 1280*Y1^3*Y2^3 + 362*Y1^2*Y2^2"
    " + 232*Y2^4*Y1 + 440*Y1^3*Y2 + 132*Y2^3*Y1 + 96*Y2^5*Y1 + 1920*Y1^4*Y2^2"
    " + 480*Y1^2*Y2^4 + 896*Y1^2*Y2^3 + 72*Y1^2*Y2 + 36*Y2^2*Y1 + 25*Y1*Y2 + 512*Y1^6"
    " + 640*Y1^5 + 48*Y1^3 + 22*Y1^2 + 200*Y1^4 + 7*Y2^2 + 24*Y2^5 + 8*Y2^6 + 6*Y2^3"
    " + 18*Y2^4 - 3*Y1 - 2*Y2"
)
TEMP2 = (
    "-3328*Y1^4*Y2 - 3456*Y1^3*Y2^2 - 3072*Y1^5*Y2 - 2560*Y1^3*Y2^3 - 724*Y1^2*Y2^2"
    " - 464*Y2^4*Y1 - 880*Y1^3*Y2 - 264*Y2^3*Y1 - 192*Y2^5*Y1 - 3840*Y1^4*Y2^2"
    " - 960*Y1^2*Y2^4 - 1792*Y1^2*Y2^3 - 120*Y1^2*Y2 - 60*Y2^2*Y1 - 39*Y1*Y2 - 1024*Y1^6"
    " - 1280*Y1^5 - 80*Y1^3 - 34*Y1^2 - 400*Y1^4 - 11*Y2^2 - 48*Y2^5 - 16*Y2^6 - 10*Y2^3"
    " - 36*Y2^4 + 6*Y1 + 4*Y2"
)

FUN1 = """\
# adds and multiplies two numbers
state x1, x2
input u1, u2 -> u1, u2
{
  temp1 := x1 + x2;
  temp2 := x1 * x2;
  x1 := temp1;
  x2 := temp2;
}
output x1, x2
"""

# the 10! program, transcribed into the frontend syntax
FUN5 = """\
state X1, X2
X1, X2 = 1, 1
{
  temp1 := X1
  temp2 := X2
}
while X2 < 11 do
  temp1 := temp1 * temp2
  temp2 := X2 + 1
  X1 := temp1
  X2 := temp2
end do
output X1
"""

# P': add/multiply with h(g) = (g1, g1*g2), H(g) = (g1 + g2, g2) and
# K(x) = (x1 + 2*x2 + 3*x3 + 4*x4, x1 - 6*x3) folded in.  The listing assigns
# one variable at a time, so each group of assignments is a sequential block.
P_PRIME = """\
state x1, x2, x3, x4
input u1, u2, g1, g2 -> u1 + g1, u2 + g1*g2, g1 + g2, g2
{
  # since g2 = x4 and g1 = x3 - x4
  x1 := x1 - x3 + x4
  x2 := x2 - x3*x4 + x4*x4
}
{
  x3 := x1 + 2*x2 + 3*x3 + 4*x4
  x4 := x1 - 6*x3
}
x1, x2 = x1 + x2, x1 * x2
output x1, x2
"""

H_FWD = ["g1 + g2", "g2"]
H_INV = ["g1 - g2", "g2"]
H_MASK = ["g1", "g1*g2"]
K_MAP = ["x1 + 2*x2 + 3*x3 + 4*x4", "x1 - 6*x3"]


def pair_from(phi, psi, names=XS2) -> AutomorphismPair:
    return AutomorphismPair.from_maps(parse_polymap(phi, names), parse_polymap(psi, names))


def first_pair() -> AutomorphismPair:
    return pair_from(FIRST_PHI, FIRST_PSI)


def small_pair() -> AutomorphismPair:
    return pair_from(SMALL_PHI, SMALL_PSI)


def fun1():
    return parse_program(FUN1)


def first_pair_4() -> AutomorphismPair:
    """The printed add/multiply pair on each half of Z^4, mixed by a triangular map.

    φ4 = (φ ⊕ φ) ∘ T with T = (x1 + x3*x4, x2 + x4^2, x3, x4), so every
    component of φ4 reads the randomness slots x3, x4.
    """
    from tamefhe.poly import compose

    def both(maps):
        hi = [c.replace("X1", "X3").replace("X2", "X4") for c in maps]
        return parse_polymap(list(maps) + hi, XS4)

    t = parse_polymap(["X1 + X3*X4", "X2 + X4^2", "X3", "X4"], XS4)
    t_inv = parse_polymap(["X1 - X3*X4", "X2 - X4^2", "X3", "X4"], XS4)
    phi = compose(both(FIRST_PHI), t)
    psi = compose(t_inv, both(FIRST_PSI))
    return AutomorphismPair.from_maps(phi, psi)


def listed_scheme(rng_bound: int = 1000):
    from tamefhe.rewrite import SchemeConfig

    G = ["g1", "g2"]
    H = AutomorphismPair.from_maps(parse_polymap(H_FWD, G), parse_polymap(H_INV, G))
    return SchemeConfig(2, 2, 4, parse_polymap(H_MASK, G), H,
                        parse_polymap(K_MAP, ["x1", "x2", "x3", "x4"]), rng_bound)


def random_program(rng, n: int, steps: int = 2, deg: int = 2, k: int | None = None):
    """Random straight-line program on Z^n with steps of degree <= deg."""
    from tamefhe.poly import PolyMap, Polynomial
    from tamefhe.program import StraightLineProgram

    def comp(dom):
        terms = []
        for _ in range(rng.randint(1, 3)):
            exps = [0] * dom
            for _ in range(rng.randint(0, deg)):
                exps[rng.randrange(dom)] += 1
            terms.append((tuple(exps), rng.randint(-3, 3)))
        return Polynomial(dom, terms)

    k = n if k is None else k
    f_in = PolyMap.from_components([comp(k) if rng.randint(0, 1) else Polynomial.var(k, i % k)
                                    for i in range(n)], k)
    body = tuple(PolyMap.from_components([comp(n) for _ in range(n)], n) for _ in range(steps))
    return StraightLineProgram(k, n, n, f_in, body, PolyMap.identity(n))
