"""Enriched average Schwarz preconditioner for mortar P1 discretizations."""

from ._maas import (
    ExperimentConfig,
    RunRecord,
    config_from_file,
    config_from_json,
    config_to_json,
    histogram_to_csv,
    records_to_csv,
    records_to_json,
    run_single,
    run_table,
    write_records,
)

__all__ = [
    "ExperimentConfig",
    "RunRecord",
    "config_from_file",
    "config_from_json",
    "config_to_json",
    "histogram_to_csv",
    "records_to_csv",
    "records_to_json",
    "run_single",
    "run_table",
    "write_records",
]
