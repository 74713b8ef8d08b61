"""Allow `python -m tiebreak` as an alias for the `tiebreak` command."""
from .cli import main

if __name__ == "__main__":
    main()
