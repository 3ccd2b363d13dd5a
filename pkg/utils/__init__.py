"""背包核心: 实例、生成器、偏置、评估指标"""
