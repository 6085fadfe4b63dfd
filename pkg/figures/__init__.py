"""Sweeps, figure recipes and plotting"""
