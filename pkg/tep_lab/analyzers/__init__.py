"""Analises de caminhos: estados criticos, tags, tracos, cronogramas e censos."""
