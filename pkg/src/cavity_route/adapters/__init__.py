"""适配器层 - 入站/出站适配器实现"""
