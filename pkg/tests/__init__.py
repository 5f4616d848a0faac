"""
Tests package for makerboard.

This package contains all unit and integration tests for the services and the CLI.
"""
