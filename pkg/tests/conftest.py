import os
import sys
import tempfile
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# one Hom-table cache for the whole session, so repeated tables are cheap
os.environ.setdefault("SINGCAT_CACHE_DIR", tempfile.mkdtemp(prefix="singcat-cache-"))


@pytest.fixture
def no_cache(monkeypatch):
    monkeypatch.delenv("SINGCAT_CACHE_DIR", raising=False)
