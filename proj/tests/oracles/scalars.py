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
"""Scalar reference values for means, divided differences and entropies."""
import numpy as np
import scipy.linalg as sl
from scipy.integrate import quad


def main():
    lam41, _ = quad(lambda s: 4.0 ** (1 - s), 0, 1, epsabs=1e-15)
    print(f"Lambda(4,1)          {lam41:.16e}")
    print(f"harmonic(1,3)        {2 * 1 * 3 / 4:.16e}")
    print(f"dlog(e,1)            {(1 - 0) / (np.e - 1):.16e}")
    # Geometric mean via the power family m = 1/2.
    print(f"geometric(2,8)       {np.sqrt(16):.16e}")
    # Relative entropy on M_2 with the normalized trace tau = Tr/2.
    rho = np.array([[1.3, 0.2 - 0.1j], [0.2 + 0.1j, 0.7]])
    sig = np.array([[1.1, 0.3], [0.3, 0.9]])
    ent = 0.5 * np.trace(rho @ (sl.logm(rho) - sl.logm(sig))).real
    print(f"Ent(rho|sigma) M_2   {ent:.16e}")
    # BKM inner product tau[A int_0^1 sigma^{1-s} A sigma^s ds] for A = diag(1,-1) style test.
    w, U = np.linalg.eigh(sig)
    A = np.array([[0.0, 1.0], [1.0, 0.5]])
    At = U.conj().T @ A @ U
    lm = np.array([[a if abs(a - b) < 1e-15 else (a - b) / (np.log(a) - np.log(b))
                    for b in w] for a in w])
    print(f"BKM <A,A>_sigma      {0.5 * np.sum(np.abs(At) ** 2 * lm):.16e}")
    print(f"KMS <X,X> diag(3/4,1/4) {kms_pauli():.16e}")


def kms_pauli():
    # tau[A sigma^{1/2} A sigma^{1/2}] for sigma = diag(3/4, 1/4), A = sigma_x.
    sh = np.diag(np.sqrt([0.75, 0.25]))
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    return 0.5 * np.trace(X @ sh @ X @ sh).real


if __name__ == "__main__":
    main()
