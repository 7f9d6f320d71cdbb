"""Tests for pirbounds"""
