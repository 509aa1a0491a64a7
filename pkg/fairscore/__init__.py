"""fairscore: group-fair score repair by optimal transport."""

__version__ = "0.1.0"
