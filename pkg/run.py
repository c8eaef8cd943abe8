import os
import sys

# run from a source checkout without installing
sys.path.insert(0, os.path.abspath("src"))

try:
    from train_track_builder.cli import main
except ImportError:
    print("Installing dependencies...")
    os.system(f"{sys.executable} -m pip install -r requirements.txt")  # nosec B605
    from train_track_builder.cli import main

if __name__ == "__main__":
    main()
