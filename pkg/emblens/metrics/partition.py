#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

"""
Information-theoretic comparison of partitions. All values are in nats.
"""

import logging

import numpy as np
from scipy.special import gammaln

from emblens.data.Partition import Partition
from emblens.metrics.ContingencyTable import ContingencyTable
from emblens.util.errors import PreconditionError

logger = logging.getLogger(__name__)

DEGENERATE = 1e-12


def check_lengths(p: Partition, q: Partition) -> None:
    if p.n != q.n:
        raise PreconditionError(f"Partition length mismatch: ({p.n}) vs ({q.n})")


def contingency(p: Partition, q: Partition) -> ContingencyTable:
    """
    Contingency table, counts[i][j] = |{s : p(s) = i and q(s) = j}|.
    :param p: Row partition.
    :param q: Column partition.
    :return: p.k × q.k table.
    :raises PreconditionError: If lengths differ.
    """
    check_lengths(p, q)
    flat = np.bincount(p.assignments * q.k + q.assignments, minlength=p.k * q.k)
    return ContingencyTable(flat.reshape(p.k, q.k))


def entropy_of_counts(counts: np.ndarray) -> float:
    """
    Shannon entropy of a count vector; zero counts contribute 0.
    :param counts: Counts.
    :return: Entropy.
    """
    counts = np.asarray(counts, dtype=np.float64)
    counts = counts[counts > 0]
    total = counts.sum()
    if total <= 0:
        return 0.0
    probabilities = counts / total
    return float(max(0.0, -np.sum(probabilities * np.log(probabilities))))


def partition_entropy(p: Partition) -> float:
    """
    Entropy H = −Σ_c (n_c/n) ln(n_c/n).
    :param p: Partition.
    :return: Entropy.
    """
    return entropy_of_counts(p.counts())


def mutual_information(t: ContingencyTable) -> float:
    """
    Mutual information of the joint distribution counts / n.
    :param t: Contingency table.
    :return: MI, clamped to >= 0.
    """
    n = float(t.n)
    rows, cols = np.nonzero(t.counts)
    cells = t.counts[rows, cols].astype(np.float64)
    a = t.row_marginals[rows].astype(np.float64)
    b = t.column_marginals[cols].astype(np.float64)

    value = float(np.sum((cells / n) * (np.log(cells * n) - np.log(a * b))))
    return max(0.0, value)


def expected_mutual_information(t: ContingencyTable) -> float:
    """
    Expected mutual information under the hypergeometric model with the table's marginals.

    For each cell (i, j) the count n_ij ranges over max(1, a_i + b_j − n) .. min(a_i, b_j)
    (n_ij = 0 contributes nothing); hypergeometric probabilities come from a
    log-factorial table. Cells are summed in a fixed row-major order.

    :param t: Contingency table.
    :return: E[I].
    """
    n = t.n
    a = t.row_marginals[t.row_marginals > 0].astype(np.int64)
    b = t.column_marginals[t.column_marginals > 0].astype(np.int64)

    log_factorial = gammaln(np.arange(n + 1, dtype=np.float64) + 1.0)
    log_n = np.log(float(n))

    terms = []
    for a_i in a:
        for b_j in b:
            start = max(1, a_i + b_j - n)
            stop = min(a_i, b_j)
            if start > stop:
                continue
            nij = np.arange(start, stop + 1, dtype=np.int64)

            log_probability = (
                log_factorial[a_i] + log_factorial[b_j] + log_factorial[n - a_i] + log_factorial[n - b_j]
                - log_factorial[n] - log_factorial[nij] - log_factorial[a_i - nij]
                - log_factorial[b_j - nij] - log_factorial[n - a_i - b_j + nij]
            )
            information = (nij / float(n)) * (log_n + np.log(nij.astype(np.float64)) - np.log(float(a_i * b_j)))
            terms.append(float(np.sum(information * np.exp(log_probability))))

    return float(sum(terms))


def adjusted_mutual_information(p: Partition, q: Partition) -> float:
    """
    AMI = (I − E[I]) / (mean(H(p), H(q)) − E[I]).

    When the denominator vanishes the result is 1.0 if the partitions are
    identical up to relabeling and 0.0 otherwise. Clamped to [−1, 1].

    :param p: Partition.
    :param q: Partition.
    :return: AMI.
    :raises PreconditionError: If lengths differ.
    """
    t = contingency(p, q)

    mi = mutual_information(t)
    emi = expected_mutual_information(t)
    normalizer = (partition_entropy(p) + partition_entropy(q)) / 2.0

    denominator = normalizer - emi
    if abs(denominator) < DEGENERATE:
        return 1.0 if p.same_structure(q) else 0.0

    return float(np.clip((mi - emi) / denominator, -1.0, 1.0))


def clustering_agreement(c1: Partition, c2: Partition) -> float:
    """
    Label-free clustering agreement AMI(C_1; C_2) between the k1 and 2·k1 k-means runs.
    :param c1: C_1.
    :param c2: C_2.
    :return: AMI.
    """
    return adjusted_mutual_information(c1, c2)


def ami_vs_ground_truth(c1: Partition, gt: Partition) -> float:
    """
    Label-dependent baseline AMI(C_1; C_GT).
    :param c1: C_1.
    :param gt: Ground-truth classes.
    :return: AMI.
    """
    return adjusted_mutual_information(c1, gt)
