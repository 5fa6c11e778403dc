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
"""Transport distance on the symmetric two-point chain by 1-D quadrature.

For q = [[0,1],[1,0]], uniform pi and the logarithmic mean, states
diag(1+x, 1-x) form a geodesic family and
  W(x0, x1) = int_{x0}^{x1} dx / sqrt(2 Lambda(1+x, 1-x)).
"""
import numpy as np
from scipy.integrate import quad


def log_mean(a, b):
    if abs(a - b) < 1e-14 * (a + b):
        return a
    return (a - b) / (np.log(a) - np.log(b))


def dist(x0, x1):
    v, _ = quad(lambda x: 1.0 / np.sqrt(2.0 * log_mean(1 + x, 1 - x)), x0, x1,
                epsabs=1e-14, epsrel=1e-12, limit=200)
    return v


def main():
    print(f"W(-0.8, 0.8) = {dist(-0.8, 0.8):.16e}")
    print(f"W(-0.5, 0.3) = {dist(-0.5, 0.3):.16e}")
    print(f"W(0.0, 0.6)  = {dist(0.0, 0.6):.16e}")


if __name__ == "__main__":
    main()
