"""File formats: vote CSV ingestion, JSON artifacts, CSV exports and manifests."""
