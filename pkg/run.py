#!/usr/bin/env python3
"""
Entry point for frustra
Usage: python run.py run --input graph.txt --out out/
"""

from src.cli import main

if __name__ == "__main__":
    main()
