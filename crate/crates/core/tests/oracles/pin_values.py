"""Independent high-precision reference values frozen into the Rust tests.

Run with `python3 pin_values.py`. Uses mpmath at 50 digits and never touches
the Rust code paths it checks.
"""
import mpmath as mp

mp.mp.dps = 50


def pois(lam, n):
    return mp.e ** (-lam) * lam ** n / mp.factorial(n)


def kappa2(kind, m, n):
    r = mp.factorial(n + m) / mp.factorial(n)
    f2 = 1 if kind == "sjcm" else (n + m)
    return r * f2


def gamma(kind, m, eta, n):
    return mp.sqrt(mp.mpf(eta) ** 2 / 4 + kappa2(kind, m, n))


def cutoff(alpha, tol):
    lam = mp.mpf(alpha) ** 2
    n = int(mp.ceil(lam))
    while True:
        tail = 1 - sum(pois(lam, k) for k in range(n + 1))
        if tail < tol:
            return n, tail
        n += 1


print("== fockspace")
n_star, tail = cutoff(8, mp.mpf("1e-12"))
print("alpha=8 cutoff", n_star, "tail", mp.nstr(tail, 20))
print("P(64)", mp.nstr(pois(64, 64), 20))
for n in (0, 1, 10, 32, 100, 128, 200):
    print("P(%d)" % n, mp.nstr(pois(64, n), 20))
with open("poisson_alpha8.txt", "w") as fh:
    fh.write("# n, Poisson(64) pmf, mpmath 50 digits\n")
    for n in range(n_star + 1):
        fh.write("%d,%s\n" % (n, mp.nstr(pois(64, n), 25)))
print("alpha=0.5 P(3)", mp.nstr(pois(mp.mpf("0.25"), 3), 20))
n4, t4 = cutoff(4, mp.mpf("1e-12"))
print("alpha=4 cutoff", n4, "tail", mp.nstr(t4, 20))

print("== evolution floor eta=100 alpha=8 m=1")
for kind in ("sjcm", "ijcm"):
    lam = mp.mpf(64)
    s = 0
    for n in range(0, 400):
        g2 = gamma(kind, 1, 100, n) ** 2
        s += pois(lam, n) * (mp.mpf(100) ** 2 / 4 - kappa2(kind, 1, n)) / g2
    print(kind, "floor", mp.nstr(s, 20))

print("== analysis revival times")
print("ijcm eta=20 nbar=64", mp.nstr(mp.pi * mp.sqrt(100 + 64 ** 2) / 64, 20))
print("sjcm eta=0 nbar=64", mp.nstr(2 * mp.pi * mp.sqrt(64), 20))
print("sjcm eta=100 nbar=64", mp.nstr(2 * mp.pi * mp.sqrt(2500 + 64), 20))
print("sjcm eta=20 nbar=64", mp.nstr(2 * mp.pi * mp.sqrt(100 + 64), 20))

print("== mu1")
def mu1(m, n):
    return (gamma("ijcm", m, 0, n + 2) - gamma("ijcm", m, 0, n)) / (2 * (n + 1))
print("mu1 m=3 n=200", mp.nstr(mu1(3, 200), 20))
print("mu1 m=3 n=500", mp.nstr(mu1(3, 500), 20))
print("mu1 m=3 n=50", mp.nstr(mu1(3, 50), 20))
def mu1_asym(m, nb):
    nb = mp.mpf(nb)
    return (2 * (m + 1) * nb ** (mp.mpf(m - 3) / 2)
            + (3 * m * m + 7 * m + 6) * nb ** (mp.mpf(m - 5) / 2)
            + ((m + 2) ** 2 * (1 + m) - 2 * m) * nb ** (mp.mpf(m - 7) / 2)) / 4
print("mu1_asym m=3 nbar=64", mp.nstr(mu1_asym(3, 64), 20))
worst = 0
for n in range(50, 501):
    e = mu1(3, n)
    a = mu1_asym(3, n)
    worst = max(worst, abs(e - a) / e)
print("mu1 exact-vs-asym max rel err n in [50,500]", mp.nstr(worst, 20))
print("mu1 rel err at 200", mp.nstr(abs(mu1(3, 200) - mu1_asym(3, 200)) / mu1(3, 200), 20))

print("== omega deviation ijcm m=3 n in [40,90]")
def omega(eta, n):
    return gamma("ijcm", 3, eta, n + 2) - gamma("ijcm", 3, eta, n)
for eta in (1000, 3000):
    dev = max(abs(omega(eta, n) - omega(0, n)) / omega(0, n) for n in range(40, 91))
    print("eta", eta, "max rel dev", mp.nstr(dev, 20))

print("== harmonic approx error budget ijcm m=3 eta=0")
def harmonic_err(alpha, m, eta, kind, ts, nmax):
    lam = mp.mpf(alpha) ** 2
    P = [pois(lam, n) for n in range(nmax + 1)]
    g = [gamma(kind, m, eta, n) for n in range(nmax + 3)]
    worst = 0
    for T in ts:
        ex = 0
        ap = 0
        for n in range(nmax + 1):
            k = mp.sqrt(kappa2(kind, m, n) * kappa2(kind, m, n + 2))
            coef = (mp.mpf(eta) ** 2 / 4 + k * mp.sqrt(mp.mpf((n + m + 1) * (n + m + 2)) / ((n + 1) * (n + 2)))) / (g[n] * g[n + 2])
            ex += P[n] * (mp.cos(T * g[n + 2]) * mp.cos(T * g[n]) + coef * mp.sin(T * g[n + 2]) * mp.sin(T * g[n]))
            ap += P[n] * mp.cos(T * (g[n + 2] - g[n]))
        worst = max(worst, abs(lam * ex - lam * ap) / lam)
    return worst
mp.mp.dps = 30
ts = [2 * mp.pi * k / 200 for k in range(201)]
print("alpha=8", mp.nstr(harmonic_err(8, 3, 0, "ijcm", ts, 160), 12))
print("alpha=5", mp.nstr(harmonic_err(5, 3, 0, "ijcm", ts, 90), 12))
