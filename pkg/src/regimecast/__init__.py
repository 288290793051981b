"""One-step-ahead forecasting of daily closing prices on full series and time regimes."""

__version__ = "0.1.0"
