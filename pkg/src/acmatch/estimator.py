"""scikit-learn style wrapper: fit on patterns, transform subjects into match indicators."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .discrimination import ManyToOneMatcher
from .one_to_one import match_root
from .patterns import as_pattern

__all__ = ["PatternMatcher"]


class PatternMatcher(BaseEstimator):
    """Match subjects against a fitted pattern set.

    ``fit(X)`` takes patterns (or pattern terms) and builds the matcher;
    ``transform(S)`` returns an ``(n_subjects, n_patterns)`` 0/1 matrix and
    ``predict(S)`` the list of matching pattern ids per subject.

    Parameters
    ----------
    strategy : {"many-to-one", "one-to-one"}
        Build a discrimination net, or try the patterns one at a time.
    """

    def __init__(self, strategy="many-to-one"):
        self.strategy = strategy

    def fit(self, X, y=None):
        if self.strategy not in ("many-to-one", "one-to-one"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        patterns = [as_pattern(p) for p in X]
        ids = list(y) if y is not None else [p.id if p.id is not None else i for i, p in enumerate(patterns)]
        if len(ids) != len(patterns):
            raise ValueError("y must give one id per pattern")
        if len(set(ids)) != len(ids):
            raise ValueError("pattern ids must be unique")
        self.patterns_ = patterns
        self.ids_ = ids
        self.n_patterns_ = len(patterns)
        self.matcher_ = None
        if self.strategy == "many-to-one":
            self.matcher_ = ManyToOneMatcher()
            for p, pid in zip(patterns, ids):
                self.matcher_.add(p, pid)
            self.matcher_.freeze()
        return self

    def _ids_for(self, subject):
        if self.matcher_ is not None:
            return self.matcher_.matching_ids(subject)
        return [pid for p, pid in zip(self.patterns_, self.ids_) if next(iter(match_root(subject, p)), None) is not None]

    def predict(self, X):
        check_is_fitted(self, "patterns_")
        return [self._ids_for(s) for s in X]

    def transform(self, X):
        check_is_fitted(self, "patterns_")
        column = {pid: j for j, pid in enumerate(self.ids_)}
        subjects = list(X)
        out = np.zeros((len(subjects), self.n_patterns_), dtype=np.int8)
        for i, s in enumerate(subjects):
            for pid in self._ids_for(s):
                out[i, column[pid]] = 1
        return out

    def match(self, subject):
        """All ``(pattern id, substitution)`` pairs for one subject."""
        check_is_fitted(self, "patterns_")
        if self.matcher_ is not None:
            return list(self.matcher_.match(subject))
        return [(pid, sigma) for p, pid in zip(self.patterns_, self.ids_) for sigma in match_root(subject, p)]
