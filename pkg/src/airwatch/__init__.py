"""Community air-quality service: sensor ingestion, EPA AQI, map API."""

__version__ = "0.1.0"
