"""Electoral control for First-Last and 2-Approval, decided through exact
and optimal matching problems."""

__version__ = "0.1.0"
