"""Corporate carbon-report analysis and climate-policy Q&A engine."""

__version__ = "0.1.0"
