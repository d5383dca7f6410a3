"""k-means with Distance Part (DP) seeding and baseline initializers."""

__version__ = "0.1.0"
