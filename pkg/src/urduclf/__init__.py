"""Filter-based feature selection and linear text classifiers for Urdu corpora."""

__version__ = "0.1.0"
