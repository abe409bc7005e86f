		
	int a;	 	
  	// indented comment
	  /*  */  
