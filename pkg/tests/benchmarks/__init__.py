# Benchmark tests for Train Track Builder
# Uses pytest-benchmark to measure performance of key operations
