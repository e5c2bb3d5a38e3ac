"""Tests for the worker pool in parallel.py."""

import os

import pytest

from fockbench.src.parallel import parallel_map, worker_count


def test_results_keep_input_order(monkeypatch):
    monkeypatch.setenv("FOCKBENCH_THREADS", "4")
    assert parallel_map(lambda x: x * x, list(range(20))) == [x * x for x in range(20)]


def test_empty_input(monkeypatch):
    monkeypatch.setenv("FOCKBENCH_THREADS", "4")
    assert parallel_map(lambda x: x, []) == []


@pytest.mark.parametrize("raw, expected", [("3", 3), ("0", None), ("many", None)])
def test_worker_count_from_environment(monkeypatch, raw, expected):
    monkeypatch.setenv("FOCKBENCH_THREADS", raw)
    assert worker_count() == (expected or os.cpu_count() or 1)
