"""
Shared test setup: isolated ledger database and console-only logging
"""
import os
import tempfile

_TMP_DIR = tempfile.mkdtemp(prefix="act-tests-")
os.environ["ACT_DATABASE_URL"] = f"sqlite:///{os.path.join(_TMP_DIR, 'runs.db')}"
os.environ["ACT_LOG_TO_FILE"] = "false"
os.environ.setdefault("ACT_LOG_LEVEL", "WARNING")

import pytest  # noqa: E402


@pytest.fixture
def tmp_artifacts(tmp_path):
    """Paths for trace and state files of one run"""
    return tmp_path / "trace.jsonl", tmp_path / "state.json"


EXAMPLE_B, EXAMPLE_C, EXAMPLE_D = 0xB0, 0xC0, 0xD0
EOA = 0xE0A


@pytest.fixture
def func_b_chains():
    """Chains 2, 3 and 4 wired for the funcB -> funcC (view) / funcD example"""
    from src.contractvm import LIBRARY, ChainState

    b, c, d = ChainState(2), ChainState(3), ChainState(4)
    b.deploy(EXAMPLE_B, True, LIBRARY.functions("example.funcB"),
             {1: 2, 2: 4, 10: 3, 11: EXAMPLE_C, 12: 4, 13: EXAMPLE_D}, body_name="example.funcB")
    c.deploy(EXAMPLE_C, True, LIBRARY.functions("example.funcC"), {1: 5}, body_name="example.funcC")
    d.deploy(EXAMPLE_D, True, LIBRARY.functions("example.funcD"), {}, body_name="example.funcD")
    return {2: b, 3: c, 4: d}


@pytest.fixture
def coordination():
    from src.txcore import CoordinationParams

    return CoordinationParams(chain=100, contract=0xC00D, timeout_block=50)
