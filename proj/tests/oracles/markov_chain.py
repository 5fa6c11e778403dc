#!/usr/bin/env python3
# Copyright 2026 qmstransport Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Closed-form quantities for reversible chains on weighted diagonal algebras.

Edge k->p carries weight w = (pi_k q_kp + pi_p q_pk) / 4. With sigma = 1:
  Dirichlet form     E(a) = sum_e w (a_p - a_k)^2
  W1 dual norm       |grad a|^2 = 1/2 sum_e w (a_p - a_k)^2 max(1/pi_k, 1/pi_p)
so W1 = sqrt(b^T Q^+ b) with b_i = pi_i (rho0 - rho1)_i, and the Poincare
constant is the smallest generalized eigenvalue of (E, diag(pi)) on the
complement of the constants.
"""
import numpy as np
import scipy.linalg as sl


def chain4():
    pi = np.array([0.1, 0.2, 0.3, 0.4])
    q = np.sqrt(pi[None, :] / pi[:, None])
    np.fill_diagonal(q, 0.0)
    return q, pi


def edges(q, pi):
    n = len(pi)
    for k in range(n):
        for p in range(n):
            if k != p and q[k, p] > 0:
                yield k, p, 0.25 * (pi[k] * q[k, p] + pi[p] * q[p, k])


def forms(q, pi):
    n = len(pi)
    E = np.zeros((n, n))
    Q = np.zeros((n, n))
    for k, p, w in edges(q, pi):
        d = np.zeros(n)
        d[p], d[k] = 1.0, -1.0
        E += w * np.outer(d, d)
        Q += 0.5 * w * max(1 / pi[k], 1 / pi[p]) * np.outer(d, d)
    return E, Q


def poincare(q, pi):
    E, _ = forms(q, pi)
    G = np.diag(pi)
    c = pi / np.linalg.norm(pi)
    Z = sl.null_space(c[None, :])
    return sl.eigh(Z.T @ E @ Z, Z.T @ G @ Z, eigvals_only=True)[0]


def w1(q, pi, r0, r1):
    _, Q = forms(q, pi)
    b = pi * (r0 - r1)
    return float(np.sqrt(b @ np.linalg.pinv(Q) @ b))


def main():
    q2 = np.array([[0.0, 1.0], [1.0, 0.0]])
    pi2 = np.array([0.5, 0.5])
    q4, pi4 = chain4()
    print(f"poincare two-point {poincare(q2, pi2):.16e}")
    print(f"poincare chain4    {poincare(q4, pi4):.16e}")
    # Densities with respect to tau = sum_i pi_i x_i.
    r0 = np.array([4.0, 1.0, 1.0, 0.75])
    r1 = np.array([1.0, 2.0, 1.0, 0.75])
    r0 /= pi4 @ r0
    r1 /= pi4 @ r1
    print("r0", ", ".join(f"{x:.17g}" for x in r0))
    print("r1", ", ".join(f"{x:.17g}" for x in r1))
    print(f"w1 chain4          {w1(q4, pi4, r0, r1):.16e}")
    a0 = np.array([1.8, 0.2])
    a1 = np.array([0.2, 1.8])
    print(f"w1 two-point       {w1(q2, pi2, a0, a1):.16e}")


if __name__ == "__main__":
    main()
