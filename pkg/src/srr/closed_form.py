"""Explicit boundary formulas for all-coded systems and three-file MDS cores.

Every function works on ints/Fractions (exact) or floats.  Outside the
hypotheses a formula was derived under, the functions raise rather than
extrapolate; the LP oracle is the authority there.
"""
from __future__ import annotations

import enum
from typing import Sequence

from ._num import div
from .errors import NotInRegionError, OutOfDomainError, UnsupportedParametersError


def all_coded_is_degenerate(C: int, K: int) -> bool:
    """With at most K-1 coded nodes no file is recoverable; the region is the origin."""
    return C <= K - 1


def all_coded_capacity(C: int, K: int, mu):
    """Total demand an all-coded system can carry: (C/K) mu, or 0 when degenerate."""
    if all_coded_is_degenerate(C, K):
        return 0 * mu
    return div(C, K) * mu


def L_all_coded(C: int, K: int, mu, lambda_hat: Sequence):
    """Largest f_K demand given the other K-1 demands, no systematic nodes.

    Returns 0 for a degenerate system at the origin.  Raises
    NotInRegionError when ``lambda_hat`` alone already exceeds capacity.
    """
    if len(lambda_hat) != K - 1:
        raise OutOfDomainError(f"lambda_hat needs {K - 1} entries, got {len(lambda_hat)}")
    if any(v < 0 for v in lambda_hat):
        raise OutOfDomainError("demands must be nonnegative")
    total = sum(lambda_hat)
    if all_coded_is_degenerate(C, K):
        if total > 0:
            raise NotInRegionError("degenerate all-coded region contains only the origin")
        return 0 * mu
    cap = div(C, K) * mu
    if total > cap:
        raise NotInRegionError(f"sum of demands {total} exceeds capacity {cap}")
    return cap - total


def region_membership_all_coded(C: int, K: int, mu, lam: Sequence) -> bool:
    if any(v < 0 for v in lam):
        return False
    if not any(lam):
        return True
    return not all_coded_is_degenerate(C, K) and sum(lam) <= div(C, K) * mu


class ThreeFileCase(enum.Enum):
    CASE1 = 1  # both demands fit on their systematic nodes
    CASE2 = 2  # f1 overflows
    CASE3 = 3  # f2 overflows
    CASE4 = 4  # both overflow

    @property
    def label(self) -> str:
        return f"Case{self.value}"


def classify_three_file(N1: int, N2: int, C: int, mu, l1, l2) -> ThreeFileCase:
    ceiling = (N1 + N2 + div(C, 3)) * mu
    for lam in (l1, l2):
        if lam < 0 or lam > ceiling:
            raise OutOfDomainError(f"demand {lam} outside [0, {ceiling}]")
    over1 = l1 > N1 * mu
    over2 = l2 > N2 * mu
    if over1 and over2:
        return ThreeFileCase.CASE4
    if over1:
        return ThreeFileCase.CASE2
    if over2:
        return ThreeFileCase.CASE3
    return ThreeFileCase.CASE1


def theorem2_preconditions(N1: int, N2: int, C: int, mu, l1, l2) -> bool:
    """Hypotheses of the three-file closed form.

    Total f1+f2 demand at most (N1 + N2 + C/3) mu, and
    C >= max(3, N1 - l1/mu, N2 - l2/mu).
    """
    if l1 < 0 or l2 < 0:
        return False
    if l1 + l2 > (N1 + N2 + div(C, 3)) * mu:
        return False
    return C >= 3 and C * mu >= N1 * mu - l1 and C * mu >= N2 * mu - l2


def L_three_file(N1: int, N2: int, N3: int, C: int, mu, l1, l2):
    """Largest f3 demand for a three-file MDS core, piecewise in (l1, l2)."""
    if not theorem2_preconditions(N1, N2, C, mu, l1, l2):
        raise UnsupportedParametersError(
            f"three-file formula needs l1+l2 <= (N1+N2+C/3)mu and C >= max(3, N1-l1/mu, N2-l2/mu);"
            f" got N=({N1},{N2},{N3}), C={C}, mu={mu}, l=({l1},{l2})")
    case = classify_three_file(N1, N2, C, mu, l1, l2)
    value = _three_file_branch(case, N1, N2, N3, C, mu, l1, l2)
    if value < 0:
        raise NotInRegionError(f"formula gives {value} < 0: (l1, l2, 0) is not in the region")
    return value


def _three_file_branch(case, N1, N2, N3, C, mu, l1, l2):
    third = div(1, 3)
    c3 = div(C, 3)
    if case is ThreeFileCase.CASE1:
        return (c3 + third * N1 + third * N2 + N3) * mu - third * l1 - third * l2
    if case is ThreeFileCase.CASE2:
        return (c3 + N1 + third * N2 + N3) * mu - l1 - third * l2
    if case is ThreeFileCase.CASE3:
        return (c3 + third * N1 + N2 + N3) * mu - third * l1 - l2
    return (c3 + N1 + N2 + N3) * mu - l1 - l2


def upper_bound_D(N1: int, N2: int, N3: int, C: int, mu, l1, l2):
    """Bound on the total demand a three-file system can serve.

    Demand r_i = min(l_i, N_i mu) rides on f_i singletons at cost 1; every
    other group costs three units of the remaining non-f3 capacity.
    """
    if l1 < 0 or l2 < 0:
        raise OutOfDomainError("demands must be nonnegative")
    r1 = min(l1, N1 * mu)
    r2 = min(l2, N2 * mu)
    return r1 + r2 + div((N1 * mu - r1) + (N2 * mu - r2) + C * mu, 3) + N3 * mu


def lambda3_cap(N1: int, N2: int, N3: int, C: int, mu, l1, l2):
    """max(D - l1 - l2, 0): an upper bound on L(l1, l2)."""
    slack = upper_bound_D(N1, N2, N3, C, mu, l1, l2) - l1 - l2
    return slack if slack > 0 else 0 * slack
