"""Scenario runners behind the command-line subcommands."""
