from .eer import Label, ScoredTrial, compute_eer, compute_eer_from_arrays
from .reports import (
    PartitionReport,
    TEST_PARTITIONS,
    average_test_eer,
    compare_with_quoted_baseline,
    evaluate_partition,
    report_to_dict,
    trials_from_csv,
    trials_to_csv,
    write_json,
    write_text,
)

__all__ = [
    "Label",
    "PartitionReport",
    "ScoredTrial",
    "TEST_PARTITIONS",
    "average_test_eer",
    "compare_with_quoted_baseline",
    "compute_eer",
    "compute_eer_from_arrays",
    "evaluate_partition",
    "report_to_dict",
    "trials_from_csv",
    "trials_to_csv",
    "write_json",
    "write_text",
]
