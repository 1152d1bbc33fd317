#!/usr/bin/env python3
"""
Main entry point for stabledrift.
Runs one subcommand of the study CLI; see `python main.py --help`.
"""

import sys

from src.experiments.cli import cli_main


def main():
    """Main function"""
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    exit_code = main()
    sys.exit(exit_code)
