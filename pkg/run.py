#!/usr/bin/env python3
"""
Simple runner script for the bridgerank CLI.
Run from project root: python run.py <command> ...
"""
import sys

from app.main import main

if __name__ == "__main__":
    sys.exit(main())
