#!/usr/bin/env python3

# float noise on count-ratio gains, eg. 801/1000 - 800/1000 > 0.001
GAIN_TOLERANCE = 1e-9


def should_stop(history: list[float], patience: int, min_delta: float = 0.0) -> bool:
    """
    True when each of the last `patience` accuracies fails to beat the best
    earlier accuracy by more than min_delta.
    :param history: Evaluation accuracies, one per epoch, oldest first.
    :param patience: Number of epochs without improvement to tolerate.
    :param min_delta: Smallest gain counted as an improvement.
    """
    if patience < 1:
        raise ValueError("patience must be >= 1, got %s" % patience)
    if len(history) < patience + 1:
        return False
    best_prior = max(history[:-patience])
    return all(acc - best_prior <= min_delta + GAIN_TOLERANCE for acc in history[-patience:])
