import sys
from pathlib import Path

import hypothesis

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

hypothesis.settings.register_profile("suite", max_examples=100, deadline=None)
hypothesis.settings.load_profile("suite")
