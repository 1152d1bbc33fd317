"""
Acceptance Run

Runs every bundled study configuration, writes one CSV per study and prints
a verdict table with the wall time of each study.
"""

import glob
import os
import sys
import time

# Add project root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.settings import SystemConfig
from src.experiments.csv_io import write_csv
from src.experiments.studies import run_study
from src.experiments.study_config import load_study_config
from src.utils.errors import StableDriftError
from src.utils.logger import setup_logging


class AcceptanceRun:
    """Run the bundled studies and collect verdicts"""

    def __init__(self, out_dir: str, seed: int = None):
        self.out_dir = out_dir
        self.seed = seed
        self.verdicts = []

    def run_config(self, path: str) -> bool:
        name = os.path.splitext(os.path.basename(path))[0]
        print(f"\n🚀 {name}")
        start = time.monotonic()
        try:
            cfg = load_study_config(path).with_overrides(seed=self.seed)
            result = run_study(cfg)
            write_csv(result.to_frame(), os.path.join(self.out_dir, f"{name}.csv"))
            passed = result.accepted
        except StableDriftError as e:
            print(f"❌ {name}: {e}")
            passed = False
        elapsed = time.monotonic() - start
        self.verdicts.append((name, passed, elapsed))
        print(f"{'✅' if passed else '❌'} {name} ({elapsed:.1f}s)")
        return passed

    def run_all(self, pattern: str) -> bool:
        paths = sorted(glob.glob(pattern))
        if not paths:
            print(f"❌ No study configs match {pattern}")
            return False
        for path in paths:
            self.run_config(path)

        print("\n📊 ACCEPTANCE REPORT")
        print("=" * 60)
        for name, passed, elapsed in self.verdicts:
            print(f"  {'PASS' if passed else 'FAIL':4}  {name:24} {elapsed:8.1f}s")
        return all(passed for _, passed, _ in self.verdicts)


def main():
    """Run all studies under config/studies"""
    setup_logging(log_level=SystemConfig.log_level())
    out_dir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(SystemConfig.BASE_DIR, "results")
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else None

    run = AcceptanceRun(out_dir, seed)
    try:
        ok = run.run_all(os.path.join(SystemConfig.STUDIES_DIR, "*.cfg"))
    except KeyboardInterrupt:
        print("\n👋 Acceptance run interrupted by user")
        return 1
    print("\n✅ All studies accepted" if ok else "\n❌ Some studies failed")
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
