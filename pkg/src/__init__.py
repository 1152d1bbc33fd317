# stabledrift package
