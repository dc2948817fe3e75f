"""Statistics for Winter Olympics medal tables.

Binomial medal-share estimates with confidence bands and confidence curves,
a k-sample likelihood-ratio test, scoring-scheme rankings with Spearman
correlation, per-capita figures and grouped logistic regression, over a set
of embedded historical tables.
"""

__version__ = "0.1.0"
