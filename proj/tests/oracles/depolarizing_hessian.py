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
"""Entropy Hessian of the qubit depolarizing structure by brute force.

Builds K_rho from explicit eigen-decompositions, integrates the Hamiltonian
geodesic flow with a finite-difference gradient of H = <A, K_rho A>/2, and
takes a second difference of the entropy. Prints C++ initializers.
"""
import numpy as np
from scipy.integrate import solve_ivp

GAMMA = 1.0
sx = np.array([[0, 1], [1, 0]], dtype=complex)
sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
sz = np.array([[1, 0], [0, -1]], dtype=complex)
V = [np.sqrt(GAMMA / 8.0) * s for s in (sx, sy, sz)]
tau = lambda X: np.trace(X).real / 2.0
basis = [np.eye(2) / 1.0, sx, sy, sz]  # orthonormal for tau


def logmean(a, b):
    if abs(a - b) < 1e-13 * max(a, b):
        return a
    return (a - b) / (np.log(a) - np.log(b))


def K(rho, A):
    w, U = np.linalg.eigh(rho)
    out = np.zeros((2, 2), dtype=complex)
    for v in V:
        dA = v @ A - A @ v
        t = U.conj().T @ dA @ U
        for k in range(2):
            for m in range(2):
                t[k, m] *= logmean(w[k], w[m])
        hat = U @ t @ U.conj().T
        vs = v.conj().T
        out += vs @ hat - hat @ vs
    return out


def coords(X):
    return np.array([tau(b @ X) for b in basis[1:]])


def herm(c, with_trace=0.0):
    return with_trace * np.eye(2) + sum(ci * b for ci, b in zip(c, basis[1:]))


def ham(rc, ac):
    rho = herm(rc, 1.0)
    A = herm(ac)
    return 0.5 * tau(A @ K(rho, A))


def rhs(_, y):
    rc, ac = y[:3], y[3:]
    rho = herm(rc, 1.0)
    A = herm(ac)
    drho = coords(K(rho, A))
    g = np.zeros(3)
    h = 1e-6
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        g[i] = (ham(rc + e, ac) - ham(rc - e, ac)) / (2 * h)
    return np.concatenate([drho, -g])


def entropy(rc):
    w = np.linalg.eigvalsh(herm(rc, 1.0))
    return 0.5 * np.sum(w * np.log(w))


def hessian_fd(rc, ac, h):
    vals = []
    for sgn in (1.0, -1.0):
        sol = solve_ivp(rhs, (0, h), np.concatenate([rc, sgn * ac]), rtol=1e-12, atol=1e-14)
        vals.append(entropy(sol.y[:3, -1]))
    return (vals[0] - 2 * entropy(rc) + vals[1]) / h ** 2


def hessian(rc, ac):
    h1, h2 = hessian_fd(rc, ac, 2e-2), hessian_fd(rc, ac, 1e-2)
    return (4 * h2 - h1) / 3


cases = [
    (np.array([0.3, -0.2, 0.1]), np.array([0.7, 0.1, -0.4])),
    (np.array([0.0, 0.0, 0.6]), np.array([1.0, 0.0, 0.0])),
    (np.array([0.5, 0.4, -0.3]), np.array([-0.2, 0.9, 0.3])),
    (np.array([0.0, 0.0, 0.0]), np.array([0.3, 0.3, 0.3])),
]
for rc, ac in cases:
    rho = herm(rc, 1.0)
    A = herm(ac)
    kaa = tau(A @ K(rho, A))
    print("{%s, %s, %.10e, %.10e}," % (
        "{" + ", ".join("%.3f" % x for x in rc) + "}",
        "{" + ", ".join("%.3f" % x for x in ac) + "}", hessian(rc, ac), kaa))
