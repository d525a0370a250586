"""Symbolic oracles for the closed-form values frozen into the C++ tests.

Run with `python3 tests/oracles/derive.py`; every identity is asserted and the
numeric values used by the tests are printed.
"""
import sympy as sp

x, y = sp.symbols("x y", real=True)
r = sp.sqrt(x**2 + y**2)
R = sp.symbols("R", positive=True)


def lap(f):
    return sp.diff(f, x, 2) + sp.diff(f, y, 2)


def grad(f):
    return sp.diff(f, x), sp.diff(f, y)


def at_radius(expr, rad=R):
    # Radial expressions: evaluate on the positive x axis.
    return sp.simplify(expr.subs({x: rad, y: 0}))


def check(name, expr):
    val = sp.simplify(expr)
    assert val == 0, (name, val)
    print(f"ok  {name}")


# Laplacian and gradient of -log(-log r).
f = -sp.log(-sp.log(r))
check("lap(-log(-log r)) = 1/(r^2 log^2 r)", at_radius(lap(f) - 1 / (r**2 * sp.log(r) ** 2)))
gx, gy = grad(f)
check("grad(-log(-log r)) = -(x,y)/(r^2 log r)",
      sp.simplify(gx + x / (r**2 * sp.log(r))) + sp.simplify(gy + y / (r**2 * sp.log(r))))

# phi = (y dx - x dy)/r^2: closed and |phi|^2 = 1/r^2.
px, py = y / r**2, -x / r**2
check("d phi = 0", sp.diff(py, x) - sp.diff(px, y))
check("|phi|^2 = 1/r^2", px**2 + py**2 - 1 / r**2)

# Kazdan-Warner pairs Delta u = |dh + a phi|^2 e^{2u}.
pairs = {
    "half_plane": (-sp.log(y), x),
    "disc": (-sp.log((1 - r**2) / 2), x),
    "punctured_disc": (-sp.log(-r * sp.log(r)), x),
    "log_metric": (-sp.log(-sp.log(r)), -sp.log(r)),
}
for name, (u, h) in pairs.items():
    hx, hy = grad(h)
    res = lap(u) - (hx**2 + hy**2) * sp.exp(2 * u)
    if name == "half_plane":
        check(f"KW residual {name}", res)
    else:
        check(f"KW residual {name}", at_radius(res))
        check(f"h harmonic {name}", at_radius(lap(h)))

# Conical metric: curvature of exp(2u)|dz|^2 with u = -log w.
a = sp.Rational(1, 2)
w_con = r**a * (1 - r ** (2 * (1 - a))) / (1 - a)
u_con = -sp.log(w_con)
K = at_radius(-sp.exp(-2 * u_con) * lap(u_con))
check("conical(1/2) curvature = -4", K + 4)
alpha = sp.symbols("alpha", positive=True)
w_gen = R**alpha * (1 - R ** (2 * (1 - alpha))) / (1 - alpha)
lap_radial = lambda g: sp.diff(g, R, 2) + sp.diff(g, R) / R
K_gen = sp.simplify(-sp.exp(2 * sp.log(w_gen)) * lap_radial(-sp.log(w_gen)))
for av in (sp.Rational(1, 4), sp.Rational(1, 3), sp.Rational(3, 4)):
    check(f"conical({av}) curvature = -4", sp.simplify(K_gen.subs(alpha, av)) + 4)
print("conical(1/2) w(1/4) =", sp.nsimplify(w_con.subs({x: sp.Rational(1, 4), y: 0})))
print("picard_local(1/2) w(1/4) =", sp.Rational(1, 4) ** a)

# log_metric connection forms at z = 0.3 + 0.2i.
u, h = pairs["log_metric"]
ux, uy = grad(u)
hx, hy = grad(h)
eu = sp.exp(u)
pt = {x: sp.Rational(3, 10), y: sp.Rational(2, 10)}
om11 = [sp.N((eu / 2 * hx - ux / 2).subs(pt), 17), sp.N((eu / 2 * hy - uy / 2).subs(pt), 17)]
om22 = [sp.N((-eu / 2 * hx - ux / 2).subs(pt), 17), sp.N((-eu / 2 * hy - uy / 2).subs(pt), 17)]
print("log_metric om11(0.3+0.2i) =", om11)
print("log_metric om22(0.3+0.2i) =", om22)

# Curvature of the log_metric pair versus -|2 eta + e^{-u} du|^2 with
# eta = (dh - e^{-u} du)/2, so 2 eta + e^{-u} du = dh.
K_log = -sp.exp(-2 * u) * lap(u)
check("K(log_metric) = -|dh|^2", at_radius(K_log + hx**2 + hy**2))

# Cubic form Xi0 = (a/(2z) - i dh/dz)/2 and 16|Xi0|^2 = |dh + a phi|^2.
z = sp.symbols("z")
zs = x + sp.I * y
for label, hz, av in [
    ("h = x", sp.Rational(1, 2), 0),
    ("h = log|z|", 1 / (2 * z), 0),
    ("h = Re z^2", z, 0),
    ("a = 1, h = 0", 0, 1),
    ("h = x, a = 0.7", sp.Rational(1, 2), sp.Rational(7, 10)),
]:
    xi = sp.simplify((av / (2 * z) - sp.I * hz) / 2)
    print(f"Xi0 for {label}: {xi}")
hcases = [(x, 0), (sp.log(r), 0), (x**2 - y**2, 0), (0 * x, 1), (x, sp.Rational(7, 10)),
          (x**3 - 3 * x * y**2 + 2 * sp.log(r), sp.Rational(-3, 10))]
for hh, av in hcases:
    dzh = (sp.diff(hh, x) - sp.I * sp.diff(hh, y)) / 2
    xi = (av / (2 * zs) - sp.I * dzh) / 2
    hx, hy = grad(hh)
    lhs = 16 * xi * sp.conjugate(xi)
    rhs = (hx + av * px) ** 2 + (hy + av * py) ** 2
    val = sp.N((lhs - rhs).subs({x: sp.Rational(3, 10), y: sp.Rational(-1, 5)}), 30)
    assert abs(val) < 1e-25, (hh, av, val)
    print(f"ok  16|Xi0|^2 = |dh + a phi|^2 for h = {hh}, a = {av}")

# Leading truncation constant of the radial stencil on f(t) = -log(-t):
# e^{-2t} dt^2 f''''(t) / 12 with f'''' = 6/t^4, at t = log 0.9.
tt = sp.symbols("t", negative=True)
f4 = sp.diff(-sp.log(-tt), tt, 4)
check("f'''' = 6/t^4", sp.simplify(f4 - 6 / tt**4))
C = sp.N((sp.exp(-2 * tt) * f4 / 12).subs(tt, sp.log(sp.Rational(9, 10))), 20)
print("log-log stencil constant C =", C)
