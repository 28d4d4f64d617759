# LangGraph assembly of the compile pipeline.
