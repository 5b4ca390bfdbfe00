"""Allow running as: python -m blockip"""

from blockip.cli import main

main()
