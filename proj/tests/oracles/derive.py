"""Independent reference values frozen into the unit tests (mpmath, 40 digits)."""
import mpmath as mp

mp.mp.dps = 40


def show(name, v):
    if isinstance(v, mp.mpc):
        print(f"{name} = {mp.nstr(v.real, 17)} {mp.nstr(v.imag, 17)}i")
    else:
        print(f"{name} = {mp.nstr(v, 17)}")


show("Ai(0)", mp.airyai(0))
show("Ai'(0)", mp.airyai(0, 1))
show("Ai(10)", mp.airyai(10))
show("Ai'(10)", mp.airyai(10, 1))
show("Ai(-3.5)", mp.airyai(-3.5))
show("Bi(-3.5)", mp.airybi(-3.5))

for sgn, name in ((-1, "A+(3)"), (1, "A-(3)")):
    r = mp.exp(sgn * 1j * mp.pi / 3)
    show(name, r * mp.airyai(r * 3))

zeros = [-mp.airyaizero(k) for k in range(1, 51)]
for k in (1, 2, 3, 10, 50):
    show(f"omega_{k}", zeros[k - 1])


def L(omega):
    # π - 2 arg(Ai(-ω) + i Bi(-ω)), unwrapped from ω = 0 (or continued below 0).
    n = max(1, int(abs(omega) * 200))
    prev = mp.atan2(mp.airybi(0), mp.airyai(0))
    acc = prev
    for i in range(1, n + 1):
        w = omega * i / n
        cur = mp.atan2(mp.airybi(-w), mp.airyai(-w))
        d = cur - prev
        while d > mp.pi:
            d -= 2 * mp.pi
        while d < -mp.pi:
            d += 2 * mp.pi
        acc += d
        prev = cur
    return mp.pi - 2 * acc


for w in (mp.mpf(1), mp.mpf(5), mp.mpf(-2), zeros[1]):
    show(f"L({mp.nstr(w, 8)})", L(w))
w20 = mp.mpf(20) ** (mp.mpf(2) / 3)
show("B(20) = pi/2 + 80/3 - L(20^(2/3))", mp.pi / 2 + mp.mpf(80) / 3 - L(w20))
show("L'(omega_1) = 2 pi int Ai^2", 2 * mp.pi * mp.airyai(-zeros[0], 1) ** 2)

# One-mode spectral field at (t, x, y) = (0.2, 0.25, -0.2), h = 2^-6, a = 0.25.
h = mp.mpf(2) ** -6
a = mp.mpf("0.25")
delta = mp.mpf("0.2")
t, x, y = mp.mpf("0.2"), mp.mpf("0.25"), mp.mpf("-0.2")
w1 = zeros[0]
norm2 = mp.airyai(-w1, 1) ** 2


def bump(s):
    return mp.e * mp.exp(-1 / (1 - s * s)) if abs(s) < 1 else mp.mpf(0)


def psi(s):
    return bump((s - 1) / delta)


def integrand(th):
    at = abs(th)
    q23 = at ** (mp.mpf(4) / 3)  # q(θ)^{2/3} with q = θ²
    rho = mp.sqrt(th * th + w1 * h ** (mp.mpf(2) / 3) * q23)
    u = at ** (mp.mpf(2) / 3) * h ** (-mp.mpf(2) / 3)
    W = psi(at) * psi(rho)
    return (W * u * mp.airyai(u * x - w1) * mp.airyai(u * a - w1) / norm2
            * mp.exp(1j * (t * rho + y * th) / h))


pts = mp.linspace(1 - delta, 1 + delta, 41)
val = (mp.quad(integrand, pts) + mp.quad(integrand, [-p for p in reversed(pts)])) / h
show("P_1(0.2, 0.25, -0.2)", val)

# Airy-sum ratio, aip_neg, b = -3, L = 200, h = 2^-8.
hh = mp.mpf(2) ** -8
s = mp.fsum(mp.mpf(k) ** (-mp.mpf(1) / 3) * mp.airyai(-3 - zeros[k - 1] if k <= 50 else -3 + mp.airyaizero(k), 1) ** 2
            for k in range(1, 201))
show("aip_neg ratio (L=200, b=-3, h=2^-8)", hh ** (mp.mpf(2) / 3) * s / (hh ** (mp.mpf(1) / 3) * mp.mpf(200) ** (mp.mpf(2) / 3)))
