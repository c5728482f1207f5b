"""Palindromic repdigit concatenations in order-3 recurrences: search and explicit bounds."""

__version__ = "0.1.0"
