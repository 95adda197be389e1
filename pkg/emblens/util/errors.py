#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from typing import Optional


class EmblensError(Exception):
    """
    Base error; `exit_code` is what the CLI exits with.
    """

    exit_code: int = 1


class InputError(EmblensError):
    """
    Bad input files, manifests or flags.
    """

    exit_code = 2


class FormatError(InputError):
    """
    Malformed embedding or partition file.
    """


class ManifestError(InputError):
    """
    Invalid run manifest.
    """


class ConfigError(InputError):
    """
    Invalid settings value.
    """


class EvaluationError(EmblensError):
    """
    Failure while computing a metric.
    """

    exit_code = 1


class PreconditionError(EvaluationError):
    """
    Operation called outside its domain (e.g. k > n, zero-norm row under cosine).
    """


class DivergenceError(EvaluationError):
    """
    Non-finite loss during probe training.
    """

    def __init__(self, epoch: int, loss: float):
        """
        Initialize divergence error.
        :param epoch: Epoch at which the loss became non-finite.
        :param loss: Offending loss value.
        """
        super().__init__(f"Linear probe diverged at epoch ({epoch}): loss={loss}")
        self.epoch = epoch
        self.loss = loss


class UndefinedCorrelationError(EvaluationError):
    """
    Pearson r undefined (constant series).
    """


class MilestoneError(EvaluationError):
    """
    Failure while evaluating one milestone; wraps the cause.
    """

    def __init__(self, milestone_id: str, cause: Exception):
        """
        Initialize milestone error.
        :param milestone_id: Milestone id.
        :param cause: Underlying exception.
        """
        super().__init__(f"Milestone '{milestone_id}': {cause}")
        self.milestone_id = milestone_id
        self.cause: Optional[Exception] = cause
