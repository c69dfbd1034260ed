"""Independent reference values for the unit tests.

Everything here is recomputed from definitions with numpy/mpmath, without
calling the library. The printed numbers are frozen in tests/unit/*.cpp;
rerun with `python3 tests/oracles/oracles.py` after changing a definition.
"""
import hashlib
import math

import mpmath as mp
import numpy as np

mp.mp.dps = 40
TWO_PI = 2.0 * math.pi


def ramp(x):
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    a, b = math.exp(-1.0 / x), math.exp(-1.0 / (1.0 - x))
    return a / (a + b)


def psi(r):
    if r <= 1.0:
        return 1.0
    if r >= 2.0:
        return 0.0
    return ramp(2.0 - r)


def phi(j, r):
    return psi(r / 2.0**j) - psi(r / 2.0 ** (j - 1))


def freqs(N):
    return np.fft.fftfreq(N, 1.0 / N)


def trig_field(N):
    """f = cos(3 x) + 0.5 sin(5 y) sampled on the N^2 grid of [0, 2 pi)^2."""
    x = np.arange(N) * TWO_PI / N
    X, Y = np.meshgrid(x, x, indexing="ij")
    return np.cos(3 * X) + 0.5 * np.sin(5 * Y)


def lp(samples, p, vol):
    a = np.abs(samples)
    if math.isinf(p):
        return a.max()
    return (a**p).mean() ** (1.0 / p) * vol ** (1.0 / p)


def besov(f, N, s, p, q):
    c = np.fft.fft2(f) / N**2
    k = freqs(N)
    KX, KY = np.meshgrid(k, k, indexing="ij")
    R = np.sqrt(KX**2 + KY**2)
    vol = TWO_PI**2
    j_min, j_max = 0, math.ceil(math.log2(N / 2)) + 1
    terms = []
    for j in range(j_min, j_max + 1):
        mult = np.vectorize(lambda r: phi(j, r))(R)
        mult[np.abs(KX) == N // 2] = 0.0
        mult[np.abs(KY) == N // 2] = 0.0
        blk = np.fft.ifft2(c * mult) * N**2
        terms.append(2.0 ** (j * s) * lp(blk, p, vol))
    terms = np.array(terms)
    return (terms**q).sum() ** (1.0 / q) if not math.isinf(q) else terms.max()


def main():
    N = 32
    f = trig_field(N)
    vol = TWO_PI**2
    print("lp_norm trig p=2", repr(lp(f, 2, vol)))
    print("lp_norm trig p=4", repr(lp(f, 4, vol)))
    print("lp_norm trig p=inf", repr(lp(np.cos(3 * np.arange(4096) * TWO_PI / 4096)[:, None] + 0.5, math.inf, 1)))
    print("besov trig s=0.5 p=2 q=1", repr(besov(f, N, 0.5, 2, 1)))
    print("besov trig s=1 p=4 q=2", repr(besov(f, N, 1.0, 4, 2)))
    print("besov trig s=-0.5 p=inf q=inf", repr(besov(f, N, -0.5, math.inf, math.inf)))
    # modulation M^{-1}_{2,1}: single-mode blocks, <k> = sqrt(1 + |k|^2)
    m = 2 * 0.5 * TWO_PI / math.sqrt(10) + 2 * 0.25 * TWO_PI / math.sqrt(26)
    print("modulation trig s=-1 p=2 q=1", repr(m))
    # exp modulation E^{0.25}_{inf,1}: 2^{0.25 |k|} |c_k|
    e = 2 * 0.5 * 2 ** (0.25 * 3) + 2 * 0.25 * 2 ** (0.25 * 5)
    print("exp_modulation trig s=0.25 p=inf q=1", repr(e))

    for z in ["1e-8", "0.005", "0.05", "0.5", "30"]:
        zz = mp.mpf(z)
        p1 = -mp.expm1(-zz) / zz
        p2 = (mp.expm1(-zz) + zz) / zz**2
        print("phi1", z, mp.nstr(p1, 17), "phi2", z, mp.nstr(p2, 17))

    # Taylor-Green (sin x cos y, -cos x sin y): ||u||_2^2 = 2 pi^2
    print("taylor_green energy", repr(2 * math.pi**2))

    # Duhamel with constant forcing F on mode xi, alpha = 1: (1 - e^{-|xi|^2 t}) / |xi|^2
    lam = 5.0
    for t in [0.1, 1.0]:
        print("duhamel const", t, repr(float(-mp.expm1(-lam * t) / lam)))
    # forcing linear in tau, F(tau) = tau: int_0^t e^{-lam (t - tau)} tau dtau
    t = 0.7
    v = mp.quad(lambda s: mp.e ** (-lam * (t - s)) * s, [0, t])
    print("duhamel linear t=0.7 lam=5", mp.nstr(v, 17))

    # Gevrey monitor, single mode xi = (1, 2), weight e^{sqrt t Lambda}, heat flow:
    # ratio e^{sqrt(t)|xi|_1 - t|xi|^2}, maximum e^{|xi|_1^2 / (4|xi|^2)}
    l1, l2 = 3.0, 5.0
    print("monitor max", repr(math.exp(l1 * l1 / (4 * l2))), "at t", repr((l1 / (2 * l2)) ** 2))
    print("monitor t=0.25", repr(math.exp(0.5 * l1 - 0.25 * l2)))

    # Chemin-Lerner L~^2(0,1; B^0_{2,1}) of e^{-t|xi|^2} cos(xi.x), xi=(2,0):
    # single shell j=1 (phi_1(2) = 1); L2 norm of cos = pi sqrt 2; trapezoid on the geometric grid
    grid = [0.0] + [1.0 * 1e-6 ** (1 - i / 31) for i in range(32)]
    vals = [math.sqrt(2) * math.pi * math.exp(-4 * t) for t in grid]
    acc = sum(0.5 * (grid[i] - grid[i - 1]) * (vals[i - 1] ** 2 + vals[i] ** 2) for i in range(1, len(grid)))
    print("chemin_lerner trapezoid", repr(math.sqrt(acc)))
    print("chemin_lerner exact", repr(math.sqrt(2) * math.pi * math.sqrt((1 - math.exp(-8)) / 8)))

    print("sha256 abc", hashlib.sha256(b"abc").hexdigest())
    print("sha256 empty", hashlib.sha256(b"").hexdigest())

    # ramp/psi values
    for x in [0.25, 0.5, 0.75]:
        print("ramp", x, repr(ramp(x)))
    print("phi_2 at r=3", repr(phi(2, 3.0)), "phi_1 at r=3", repr(phi(1, 3.0)))


if __name__ == "__main__":
    main()
