from pathlib import Path


DATA_DIRECTORY = Path(__file__).parent / "data"
