"""态矢量模拟器与 xQAOA 电路"""
