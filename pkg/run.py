import sys

from src.main import main

if __name__ == "__main__":
    # Run the command-line interface
    sys.exit(main())
