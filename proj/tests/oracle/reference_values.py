"""Independent reference values for the unit tests.

Dense numpy/cvxpy computations that share no code with the C++ library.
Run: python3 reference_values.py
"""
from math import comb, exp, lgamma, log, sqrt

import cvxpy as cp
import numpy as np


def lf(k):
    return lgamma(k + 1)


def d_core(tj, tm1, tm, r):
    """r^{m-m'} sum_k Delta_k r^{2k} for twice-valued spins, direct sum."""
    if tm < tm1:
        tm, tm1 = tm1, tm
    jm, jpm = (tj - tm) // 2, (tj + tm) // 2
    jm1, jpm1 = (tj - tm1) // 2, (tj + tm1) // 2
    d = (tm - tm1) // 2
    tot = 0.0
    for k in range(0, min(jm, jpm1) + 1):
        lt = 0.5 * (lf(jm) + lf(jpm) + lf(jm1) + lf(jpm1)) - (
            lf(jm - k) + lf(jpm1 - k) + lf(d + k) + lf(k))
        tot += exp(lt) * r ** (d + 2 * k)
    return tot


def multicopy(n):
    return np.array([sqrt(comb(n, b) / 2 ** n) for b in range(n + 1)])


def dense_state(n, r, c):
    dim = 2 ** n
    psi = np.array([c[bin(b).count("1")] / sqrt(comb(n, bin(b).count("1")))
                    for b in range(dim)])
    rho = np.outer(psi, psi)
    for a in range(dim):
        for b in range(dim):
            rho[a, b] *= r ** bin(a ^ b).count("1")
    return rho


def dense_blocks(n, r, c):
    """Projection of the dense state onto |j,m,alpha>, via scipy null spaces."""
    import scipy.linalg as sl
    dim = 2 ** n
    jz = np.diag([sum(0.5 if not (b >> i) & 1 else -0.5 for i in range(n))
                  for b in range(dim)])
    jp = np.zeros((dim, dim))
    for b in range(dim):
        for i in range(n):
            if (b >> i) & 1:
                jp[b ^ (1 << i), b] += 1
    jm = jp.T
    rho = dense_state(n, r, c)
    out = {}
    for tj in range(n, -1, -2):
        idx = [b for b in range(dim) if abs(jz[b, b] - tj / 2) < 1e-9]
        ns = sl.null_space(jp[:, idx])
        acc = np.zeros((tj + 1, tj + 1))
        for k in range(ns.shape[1]):
            v = np.zeros(dim)
            v[idx] = ns[:, k]
            chain = [v]
            for _ in range(tj):
                w = jm @ chain[-1]
                chain.append(w / np.linalg.norm(w))
            vecs = np.array(chain[::-1]).T  # m = -j..j
            acc += vecs.T @ rho @ vecs
        p = np.trace(acc)
        out[tj] = (p, acc / p if p > 0 else acc)
    return out


def block(n, tj, r, c):
    ms = list(range(-tj, tj + 1, 2))
    d = len(ms)
    m = np.zeros((d, d))
    for a, ma in enumerate(ms):
        for b, mb in enumerate(ms):
            ba, bb = (n - ma) // 2, (n - mb) // 2
            m[a, b] = c[ba] * c[bb] * d_core(tj, ma, mb, r) / sqrt(
                comb(n, ba) * comb(n, bb))
    pfac = (1 - r * r) ** ((n - tj) // 2)
    nu = comb(n, (n - tj) // 2) * (tj + 1) // ((n + tj) // 2 + 1)
    return nu * pfac * np.trace(m), m / np.trace(m)


def hamiltonian(rho):
    d = len(rho)
    a = [rho[i, i + 1] / sqrt(rho[i, i] * rho[i + 1, i + 1]) for i in range(d - 1)]
    return 2 * np.eye(d) - np.diag(a, 1) - np.diag(a, -1), np.array(a)


def block_sdp(h, env, s):
    """min tr(H L), L >= 0, tr L = 1, L_mm <= env_m^2 / s: exact for Z-matrices."""
    d = len(env)
    lam = cp.Variable((d, d), symmetric=True)
    cons = [lam >> 0, cp.trace(lam) == 1, cp.diag(lam) <= env ** 2 / s]
    prob = cp.Problem(cp.Minimize(cp.trace(h @ lam)), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12,
               tol_feas=1e-12)
    return prob.value, lam.value


def global_sdp(blocks, S):
    lams = [cp.Variable((len(rho), len(rho)), symmetric=True) for _, rho, _ in blocks]
    cons = [sum(cp.trace(l) for l in lams) == 1]
    for l, (p, rho, _) in zip(lams, blocks):
        cons += [l >> 0, cp.diag(l) <= p * np.diag(rho) / S]
    obj = sum(cp.trace(h @ l) for l, (_, _, h) in zip(lams, blocks))
    prob = cp.Problem(cp.Minimize(obj), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12,
               tol_feas=1e-12)
    return prob.value


def main():
    np.set_printoptions(precision=15)
    print("ln C(100,50) =", repr(log(comb(100, 50))), " C =", comb(100, 50))

    c2 = multicopy(2)
    dense2 = dense_blocks(2, 0.5, c2)
    print("n=2 r=0.5 dense p:", {k: v[0] for k, v in dense2.items()})
    print("n=2 r=0.5 j=1 a:", hamiltonian(dense2[2][1])[1])

    p3, rho3 = block(3, 3, 0.5, multicopy(3))
    print("n=3 r=0.5 j=3/2 p:", repr(p3), "min eig:", repr(np.linalg.eigvalsh(rho3)[0]))
    print("n=3 r=0.5 j=3/2 diag:", np.diag(rho3))

    n, r = 6, 0.8
    c = multicopy(n)
    blocks = []
    per_block = 0.0
    for tj in range(n, -1, -2):
        p, rho = block(n, tj, r, c)
        h, _ = hamiltonian(rho)
        w, v = np.linalg.eigh(h)
        xi = np.abs(v[:, 0])
        s_star = min(np.diag(rho) / xi ** 2)
        det = 2 - 2 * np.sum(np.diag(rho, 1))
        print(f"n=6 r=0.8 j={tj/2}: p={p!r} ground={w[0]!r} s*={s_star!r} det={det!r}")
        per_block += p * s_star
        blocks.append((p, rho, h))
    print("n=6 r=0.8 S*_per_block =", repr(per_block))
    for s_bar in (0.0, 0.1, 0.3, 0.5, 0.7):
        print(f"n=6 r=0.8 S_bar={s_bar}: sigma2 =", repr(global_sdp(blocks, 1 - s_bar)))

    p4, rho4 = block(4, 4, 0.6, multicopy(4))
    h4, _ = hamiltonian(rho4)
    env4 = np.sqrt(np.diag(rho4))
    for s in (0.9, 0.6, 0.3):
        print(f"n=4 r=0.6 j=2 s={s}: sigma2 =", repr(block_sdp(h4, env4, s)[0]))

    # n=80, r=0.8, typical block j=32, s=0.75.
    p80, rho80 = block(80, 64, 0.8, multicopy(80))
    h80, _ = hamiltonian(rho80)
    env80 = np.sqrt(np.diag(rho80))
    val, lam = block_sdp(h80, env80, 0.75)
    w, v = np.linalg.eigh(lam)
    xi = np.abs(v[:, -1])
    ms = np.arange(-32, 33)
    tight = [m for m, x, e in zip(ms, xi, env80) if x >= e / sqrt(0.75) - 1e-5]
    print("n=80 j=32 s=0.75 sigma2 =", repr(val), "coincidence |m| >=",
          min(abs(m) for m in tight))

    # Best deterministic probe: sigma2 = 2 - 2 sum_b c_b c_{b+1} w_b, so the
    # optimum is 2 minus the top eigenvalue of the symmetric coupling matrix.
    n, r = 60, 0.8
    w = np.zeros(n)
    for b in range(n):
        tm, tm1 = n - 2 * b, n - 2 * b - 2
        tot = 0.0
        for tj in range(n, -1, -2):
            if abs(tm) > tj or abs(tm1) > tj:
                continue
            nu = comb(n, (n - tj) // 2) * (tj + 1) // ((n + tj) // 2 + 1)
            tot += nu * (1 - r * r) ** ((n - tj) // 2) * d_core(tj, tm, tm1, r)
        w[b] = tot / sqrt(comb(n, b) * comb(n, b + 1))
    top = np.linalg.eigvalsh(np.diag(w, 1) + np.diag(w, -1))[-1]
    print("n=60 r=0.8 optimal deterministic sigma2 =", repr(2 - top))


if __name__ == "__main__":
    main()
