"""Exact reproduction toolkit for the authentication-with-limited-communication (ALC) game."""

__version__ = "0.1.0"
